#include "qgames/session.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qgames {

std::string to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::SpoilerToMove: return "spoiler-to-move";
    case SessionStatus::DuplicatorToMove: return "duplicator-to-move";
    case SessionStatus::SpoilerWon: return "spoiler-won";
    case SessionStatus::DuplicatorWon: return "duplicator-won";
  }
  return "?";
}

GameSession::GameSession(const std::vector<LabeledStructure>& set_a,
                         const std::vector<LabeledStructure>& set_b, std::size_t rounds,
                         Player human_role, SessionOptions opts)
    : rounds_(rounds), rounds_left_(rounds), human_role_(human_role), opts_(opts) {
  if (set_a.empty() || set_b.empty()) throw InvalidArgument("both sides need a structure");
  const Vocabulary& vocab = set_a.front().structure().vocabulary();
  const std::size_t pins = set_a.front().pins.size();
  for (const auto* set : {&set_a, &set_b})
    for (const LabeledStructure& x : *set) {
      if (!(x.structure().vocabulary() == vocab)) throw InvalidArgument("vocabulary mismatch");
      if (x.pins.size() != pins) throw InvalidArgument("pin-count mismatch");
      for (Element p : x.pins)
        if (p >= x.structure().size()) throw InvalidArgument("pin outside the universe");
    }
  for (const LabeledStructure& x : set_a) add_class(a_, a_keys_, next_index_, x);
  for (const LabeledStructure& x : set_b) add_class(b_, b_keys_, next_index_, x);
  check_terminal();
}

std::optional<Player> GameSession::winner() const {
  if (status_ == SessionStatus::SpoilerWon) return Player::Spoiler;
  if (status_ == SessionStatus::DuplicatorWon) return Player::Duplicator;
  return std::nullopt;
}

CanonicalKey GameSession::key(const LabeledStructure& x) const {
  return labeled_canonical_form(x, opts_.canon);
}

void GameSession::add_class(std::vector<SessionClass>& side, std::vector<CanonicalKey>& keys,
                            std::size_t index, LabeledStructure value) {
  CanonicalKey k = key(value);
  if (std::find(keys.begin(), keys.end(), k) != keys.end()) return;
  if (side.size() >= opts_.max_classes)
    throw ResourceLimit("classes-per-side",
                        "more than " + std::to_string(opts_.max_classes) + " classes on a side");
  keys.push_back(std::move(k));
  side.push_back({index, std::move(value)});
  if (index >= next_index_) next_index_ = index + 1;
}

void GameSession::check_terminal() {
  bool any_partial = false, any_iso = false;
  for (std::size_t i = 0; i < a_.size() && !any_iso; ++i)
    for (std::size_t j = 0; j < b_.size() && !any_iso; ++j)
      if (partial_isomorphism(a_[i].value, b_[j].value)) {
        any_partial = true;
        any_iso = a_keys_[i] == b_keys_[j];
      }
  if (!any_partial)
    status_ = SessionStatus::SpoilerWon;
  else if (rounds_left_ == 0 || any_iso)
    status_ = SessionStatus::DuplicatorWon;
  else
    status_ = SessionStatus::SpoilerToMove;
}

void GameSession::spoiler_move(Side side, const std::vector<ClassChoice>& choices) {
  if (status_ == SessionStatus::SpoilerToMove && human_role_ != Player::Spoiler)
    throw WrongTurn("Spoiler is played by the engine in this session");
  play_spoiler(side, choices);
}

void GameSession::play_spoiler(Side side, const std::vector<ClassChoice>& choices) {
  if (winner()) throw SessionFinished("the game is over");
  if (status_ != SessionStatus::SpoilerToMove) throw WrongTurn("Duplicator is to move");
  const std::vector<SessionClass>& mover = this->side(side);
  std::map<std::size_t, Element> chosen;
  for (const ClassChoice& c : choices) {
    const auto it = std::find_if(mover.begin(), mover.end(),
                                 [&](const SessionClass& k) { return k.index == c.class_index; });
    if (it == mover.end())
      throw IllegalMove("no class " + std::to_string(c.class_index) + " on side " +
                        to_string(side));
    if (c.element >= it->value.structure().size())
      throw IllegalMove("element " + std::to_string(c.element) + " is outside class " +
                        std::to_string(c.class_index) + " (size " +
                        std::to_string(it->value.structure().size()) + ")");
    if (!chosen.emplace(c.class_index, c.element).second)
      throw IllegalMove("class " + std::to_string(c.class_index) + " chosen twice");
  }
  if (chosen.size() != mover.size())
    throw IllegalMove("a move needs one element for every class on side " + to_string(side));

  std::vector<SessionClass> next;
  std::vector<CanonicalKey> next_keys;
  LoggedMove entry{LoggedMove::Kind::SpoilerMove, side, {}};
  for (const SessionClass& c : mover) {
    const Element e = chosen.at(c.index);
    entry.choices.push_back({c.index, e});
    add_class(next, next_keys, c.index, c.value.extended(e));
  }
  (side == Side::A ? a_ : b_) = std::move(next);
  (side == Side::A ? a_keys_ : b_keys_) = std::move(next_keys);
  moved_ = side;
  status_ = SessionStatus::DuplicatorToMove;
  log_.push_back(std::move(entry));
}

void GameSession::duplicator_auto() {
  if (winner()) throw SessionFinished("the game is over");
  if (status_ != SessionStatus::DuplicatorToMove) throw WrongTurn("Spoiler is to move");
  const Side other = *moved_ == Side::A ? Side::B : Side::A;
  std::vector<SessionClass> next;
  std::vector<CanonicalKey> next_keys;
  std::size_t index = next_index_;
  for (const SessionClass& c : side(other))
    for (Element e = 0; e < c.value.structure().size(); ++e) {
      const std::size_t before = next.size();
      add_class(next, next_keys, index, c.value.extended(e));
      if (next.size() > before) ++index;
    }
  (other == Side::A ? a_ : b_) = std::move(next);
  (other == Side::A ? a_keys_ : b_keys_) = std::move(next_keys);
  moved_.reset();
  --rounds_left_;
  log_.push_back({LoggedMove::Kind::DuplicatorAuto, other, {}});
  check_terminal();
}

SpoilerMove GameSession::heuristic_move() const {
  std::optional<SpoilerMove> best;
  std::size_t best_score = 0;
  for (Side side : {Side::A, Side::B}) {
    const auto& mover = this->side(side);
    const auto& other = this->side(side == Side::A ? Side::B : Side::A);
    SpoilerMove move{side, {}};
    std::size_t score = 0;
    for (const SessionClass& c : mover) {
      Element pick = 0;
      std::size_t pick_score = 0;
      for (Element e = 0; e < c.value.structure().size(); ++e) {
        const LabeledStructure x = c.value.extended(e);
        std::size_t broken = 0;
        for (const SessionClass& d : other) {
          bool keeps = false;
          for (Element f = 0; f < d.value.structure().size() && !keeps; ++f)
            keeps = partial_isomorphism(x, d.value.extended(f));
          if (!keeps) ++broken;
        }
        if (e == 0 || broken > pick_score) {
          pick = e;
          pick_score = broken;
        }
      }
      move.choices.push_back(pick);
      score += pick_score;
    }
    if (!best || score > best_score) best = std::move(move), best_score = score;
  }
  return *best;
}

EngineMove GameSession::engine_suggestion() const {
  if (winner()) throw SessionFinished("the game is over");
  if (status_ != SessionStatus::SpoilerToMove) throw WrongTurn("Duplicator is to move");
  std::vector<LabeledStructure> set_a, set_b;
  for (const auto& c : a_) set_a.push_back(c.value);
  for (const auto& c : b_) set_b.push_back(c.value);
  EngineMove out;
  std::optional<SpoilerMove> move;
  try {
    const GameOutcome res = solve_ms(set_a, set_b, rounds_left_, opts_.solver);
    out.exact = true;
    out.solver_winner = res.winner;
    if (res.witness) move = res.witness;
  } catch (const ResourceLimit& e) {
    out.budget = e.budget();
  }
  if (!move) move = heuristic_move();
  out.side = move->side;
  const auto& mover = side(move->side);
  for (std::size_t i = 0; i < mover.size(); ++i)
    out.choices.push_back({mover[i].index, move->choices[i]});
  return out;
}

EngineMove GameSession::engine_spoiler() {
  EngineMove m = engine_suggestion();
  play_spoiler(m.side, m.choices);
  return m;
}

void GameSession::apply(const LoggedMove& m) {
  if (m.kind == LoggedMove::Kind::DuplicatorAuto)
    duplicator_auto();
  else
    play_spoiler(m.side, m.choices);
}

}  // namespace qgames
