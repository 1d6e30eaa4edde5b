#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "zslab/tame.hpp"

namespace zslab {

// A finite Krull monoid model: finitely many primes, each assigned a
// nonzero class. Elements are multisets of primes whose classes sum to 0.
class KrullModel {
public:
  // (class, number of primes in it); classes may repeat and are merged
  static KrullModel make(GroupPtr group, const std::vector<std::pair<Elem, int>>& class_counts);
  // {"group": "2,2,2", "primes": [{"class": [0,0,1], "count": 2}, ...]}
  static KrullModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const GroupPtr& group() const { return group_; }
  int prime_count() const { return static_cast<int>(class_of_.size()); }
  Elem class_of(int prime) const { return class_of_[prime]; }
  const std::vector<int>& primes_in(Elem cls) const { return primes_in_[cls]; }
  const std::vector<Elem>& classes() const { return classes_; }  // G_P, ascending
  std::string prime_name(int prime) const { return "p" + std::to_string(prime); }

  // Atoms of the block monoid over G_P.
  const TablePtr& block_table() const;

private:
  GroupPtr group_;
  std::vector<Elem> class_of_;
  std::vector<std::vector<int>> primes_in_;
  std::vector<Elem> classes_;
  struct Lazy {
    std::once_flag once;
    TablePtr table;
  };
  std::shared_ptr<Lazy> lazy_ = std::make_shared<Lazy>();
};

// Multiset of primes of a model, dense by prime index.
struct PSequence {
  std::vector<Count> counts;

  static PSequence from_primes(const KrullModel& model, const std::vector<int>& primes);
  int length() const;
  std::vector<int> support() const;
  bool operator==(const PSequence& other) const { return counts == other.counts; }
  nlohmann::json to_json(const KrullModel& model) const;  // [[name, multiplicity], ...]
};

Sequence block_image(const PSequence& s, const KrullModel& model);
bool is_h_atom(const PSequence& s, const KrullModel& model);
bool p_divides(const PSequence& a, const PSequence& b);

// min L in the model through the block image (the class map is a transfer
// homomorphism), and a direct check over the model's own atoms (|w| <= 10).
int min_length_h(const PSequence& w, const KrullModel& model);
int min_length_h_direct(const PSequence& w, const KrullModel& model);

// Every atom of the model (small models only) and one atom per orbit under
// permuting primes inside their classes.
std::vector<PSequence> h_atoms(const KrullModel& model, std::size_t limit = 200'000);
std::vector<PSequence> h_atom_representatives(const KrullModel& model);

struct ModelHypotheses {
  bool symmetric_classes = false;  // G_P = -G_P
  bool all_classes = false;        // G_P = G \ {0}
  int min_primes_per_class = 0;
  bool saturated = false;          // every class of G_P holds >= D(G_P)+1 primes
  bool divisor_theory = false;     // every prime is the gcd of the elements it divides
  std::vector<std::string> notes;
  nlohmann::json to_json() const;
};
ModelHypotheses model_hypotheses(const KrullModel& model);

struct ModelCover {
  PSequence u;
  std::vector<PSequence> covers;
  PSequence w;
  int min_len_w = 0;
  int value = 0;
  nlohmann::json to_json(const KrullModel& model) const;
};
CoverVerdict verify_model_cover(const ModelCover& c, const KrullModel& model);
ModelCover make_model_cover(const PSequence& u, std::vector<PSequence> covers, const KrullModel& model);

struct ModelResult {
  int value = 0;
  std::optional<ModelCover> certificate;
  int atoms_searched = 0;
};
ModelResult t_model_local(const PSequence& u, const KrullModel& model, const SearchOptions& options = {});
ModelResult t_model_global(const KrullModel& model, const SearchOptions& options = {});

} // namespace zslab
