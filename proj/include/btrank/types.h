#ifndef BTRANK_TYPES_H_
#define BTRANK_TYPES_H_

// Domain types shared by every stage of the ranking pipeline: count data,
// perturbation choices, model selection, fitted parameters and rankings.
//
// Indexing: team i is the i-th entry of Dataset::teams(). Every matrix is
// indexed [row][column] with the row team as the subject, e.g.
// a_home(i, j) is the number of times i beat j while hosting j.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace btrank {

// Dense row-major t x t matrix.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int size, T fill = T{})
      : size_(size), data_(static_cast<size_t>(size) * size, fill) {}

  int size() const { return size_; }
  T& operator()(int row, int col) { return data_[Index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[Index(row, col)]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  size_t Index(int row, int col) const {
    return static_cast<size_t>(row) * size_ + col;
  }

  int size_ = 0;
  std::vector<T> data_;
};

using CountMatrix = SquareMatrix<std::int64_t>;
using RealMatrix = SquareMatrix<double>;

// Raw outcome counts split by venue.
//   a_home(i, j): i beat j with i at home        (a_{ij.i})
//   a_away(i, j): i beat j with j at home        (a_{ij.j})
//   t_home(i, j): i and j tied with i at home    (t_{ij.i})
struct CountMatrices {
  CountMatrix a_home;
  CountMatrix a_away;
  CountMatrix t_home;

  CountMatrices() = default;
  explicit CountMatrices(int size)
      : a_home(size), a_away(size), t_home(size) {}

  int size() const { return a_home.size(); }
  bool operator==(const CountMatrices&) const = default;
};

// Venue-summed totals derived from CountMatrices.
struct DerivedTotals {
  CountMatrix wins;    // a_ij = a_home(i,j) + a_away(i,j)
  CountMatrix ties;    // t_ij = t_home(i,j) + t_home(j,i), symmetric
  CountMatrix games;   // n_ij = a_ij + a_ji + t_ij, symmetric
  CountMatrix hosted;  // n_{ij.i} = a_home(i,j) + a_away(j,i) + t_home(i,j)

  bool operator==(const DerivedTotals&) const = default;
};

DerivedTotals DeriveTotals(const CountMatrices& counts);

// Immutable paired-comparison data set. Construction validates the counts
// and throws ShapeError / NegativeCountError.
class Dataset {
 public:
  // `venueless` marks data whose venue split is synthetic (matrix input
  // without home/away information); venue-aware operations refuse it.
  Dataset(std::vector<std::string> teams, CountMatrices counts,
          bool venueless = false);

  int num_teams() const { return static_cast<int>(teams_.size()); }
  const std::vector<std::string>& teams() const { return teams_; }
  const CountMatrices& counts() const { return counts_; }
  const DerivedTotals& totals() const { return totals_; }
  bool venueless() const { return venueless_; }

  std::optional<int> IndexOf(std::string_view team) const;
  bool HasTies() const;
  // a_i = sum_j a_ij.
  std::vector<double> WinScores() const;
  // Total number of games (each game counted once).
  std::int64_t TotalGames() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> teams_;
  CountMatrices counts_;
  DerivedTotals totals_;
  bool venueless_ = false;
};

// How pseudo-counts are added to the win counts before fitting.
struct PerturbationSpec {
  enum class Kind { kImproved, kConnerGrant, kMatrix };

  Kind kind = Kind::kImproved;
  double epsilon = 0.0;
  RealMatrix prior;  // only for kMatrix

  // eps added only where a comparison took place.
  static PerturbationSpec Improved(double epsilon);
  // eps added to every off-diagonal cell.
  static PerturbationSpec ConnerGrant(double epsilon);
  // General prior-count matrix; entries > -1 with zero diagonal.
  static PerturbationSpec Matrix(RealMatrix prior);

  // Throws NonPositiveEpsilonError or ShapeError.
  void Validate() const;
};

// Perturbed counts consumed by the likelihoods. Ties are never perturbed.
struct PerturbedCounts {
  RealMatrix wins;  // venue-free a~_ij
  RealMatrix ties;  // t_ij, symmetric

  // Venue split: wins_home(i,j) = a~_{ij.i}, wins_away(i,j) = a~_{ij.j},
  // ties_home(i,j) = t_{ij.i}. Present only when has_venues.
  bool has_venues = false;
  RealMatrix wins_home;
  RealMatrix wins_away;
  RealMatrix ties_home;

  int size() const { return wins.size(); }
  bool HasTies() const;
};

enum class ModelKind { kBradleyTerry, kRaoKupper, kDavidson, kHomeField, kDavid };

std::string_view ModelName(ModelKind model);
// Accepts the CLI spellings: bt, rao-kupper, davidson, home-field, david.
std::optional<ModelKind> ParseModelName(std::string_view name);
bool ModelHasTieParameter(ModelKind model);
bool ModelHasHomeParameter(ModelKind model);

struct Normalization {
  enum class Kind { kReference, kSimplex };
  Kind kind = Kind::kReference;
  int reference = 0;  // team whose merit is fixed at 1 (kReference only)

  static Normalization Reference(int team = 0) {
    return {Kind::kReference, team};
  }
  static Normalization Simplex() { return {Kind::kSimplex, 0}; }
  bool operator==(const Normalization&) const = default;
};

struct ModelSpec {
  ModelKind model = ModelKind::kBradleyTerry;
  PerturbationSpec perturbation = PerturbationSpec::Improved(0.1);
  Normalization normalization;
};

// A point in the concave parameterization: beta_i = log u_i - log u_0,
// phi = log theta, log_gamma = log gamma. Tie / home parameters are present
// exactly when the model has them.
struct ParameterPoint {
  std::vector<double> beta;
  std::optional<double> phi;
  std::optional<double> log_gamma;
};

struct FitResult {
  ModelKind model = ModelKind::kBradleyTerry;
  std::vector<std::string> teams;
  std::vector<double> beta;    // log u_i - log u_0
  std::vector<double> merits;  // u_i in `normalization`
  Normalization normalization;
  std::optional<double> theta;
  std::optional<double> gamma;
  std::optional<double> epsilon;  // perturbation size, when one was used
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_sup_norm = 0.0;
  // Objective value after each iteration.
  std::vector<double> trace;
  // Largest sup-norm beta deviation of any restart from the reported optimum.
  std::optional<double> restart_spread;
};

// Merits whose beta differ by less than this belong to one tie group.
inline constexpr double kRankTolerance = 1e-9;

struct Ranking {
  std::vector<int> order;                // best to worst
  std::vector<std::vector<int>> groups;  // consecutive tie groups along order
  std::vector<double> keys;              // sort key per team (beta or score)
  std::vector<double> scores;            // a_i per team

  // 1-based rank of every team; tied teams share the rank of their group.
  std::vector<int> RankOf() const;
};

enum class Condition { kA, kB, kC };
std::string_view ConditionName(Condition condition);

// A split of all teams into two nonempty sets demonstrating that
// `violated` fails.
struct PartitionWitness {
  std::vector<int> q1;
  std::vector<int> q2;
  Condition violated = Condition::kB;
  std::string detail;
};

}  // namespace btrank

#endif  // BTRANK_TYPES_H_
