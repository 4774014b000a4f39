#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace nomaqos {

// Polyblock outer approximation for
//
//     max f(x)  s.t.  x in G ∩ H
//
// where f is nondecreasing, G is a normal set reachable only through a
// membership oracle, and H = {x : x >= lower} is a conormal box. The engine is
// independent of the NOMA model; noma_core supplies the oracle.

using Point = std::vector<double>;
using MembershipOracle = std::function<bool(std::span<const double>)>;
using Objective = std::function<double(std::span<const double>)>;

struct SolverConfig {
    double delta = 1e-6;        // termination gap, l-inf normalized by the initial vertex
    double eps_proj = 1e-7;     // projection precision on the ray parameter
    std::size_t max_iter = 10000;
    std::size_t max_vertices = 200000;
    // Stop once f(z_k) - Q_k <= value_tol * |f(z_k)|. Zero keeps only the
    // exact rule f(z_k) <= Q_k, which is what a step objective needs.
    double value_tol = 0.0;

    void validate() const;
};

enum class SolveStatus { converged, iteration_cap, vertex_cap, infeasible };

/// Which stopping rule fired when status == converged.
enum class Termination {
    none,
    feasible_vertex,      // best vertex already in G
    bound_met,            // best vertex value cannot beat the incumbent
    gap,                  // ||z_k - x_bar_k|| <= delta
    polyblock_exhausted,  // every vertex pruned after an incumbent was found
};

std::string_view to_string(SolveStatus status);
std::string_view to_string(Termination termination);

/// Vertex set of a polyblock together with the objective value of each
/// vertex, cached at insertion.
class Polyblock {
public:
    Polyblock(std::size_t dimension, Objective objective);
    Polyblock(std::vector<Point> vertices, Objective objective);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::span<const double> vertex(std::size_t i) const {
        return {coords_.data() + i * dimension_, dimension_};
    }
    double value(std::size_t i) const { return values_[i]; }
    std::vector<Point> vertices() const;

    void insert(std::span<const double> z);
    /// Removes the given vertices. The last vertex fills each hole, so
    /// indices of the survivors may change.
    void erase(std::vector<std::size_t> indices);

    /// No vertex is dominated by, or equal to, another one.
    bool is_proper() const;
    /// Some vertex z satisfies z >= y componentwise.
    bool covers(std::span<const double> y) const;

private:
    std::size_t dimension_;
    Objective objective_;
    std::vector<double> coords_;  // row-major, dimension_ per vertex
    std::vector<double> values_;
};

/// lambda * z with lambda = max{a in [0, 1] : a z in G}. Returns z itself
/// when z is already in G. Throws std::invalid_argument for z == 0.
Point project_to_boundary(std::span<const double> z, const MembershipOracle& in_g, double eps_proj);

/// Index of the vertex with the largest cached value; ties go to the larger
/// component sum, then to the lexicographically larger point. Throws
/// std::out_of_range on an empty set.
std::size_t select_best_vertex(const Polyblock& t);

/// Removes the selected vertex and every vertex strictly above x_proj (zero
/// coordinates of x_proj only need to be matched), and adds for each removed
/// z the children z + (x_i - z_i) e_i. Children with a zero step duplicate
/// their parent and are skipped. Returns the index of the first child.
std::size_t expand_vertex_set(Polyblock& t, std::span<const double> z_best, std::span<const double> x_proj);

/// Drops improper vertices and vertices below the H lower bounds. Vertices
/// before `first_unchecked` are assumed to be mutually proper already; the
/// solver passes the index returned by expand_vertex_set so each iteration
/// only compares the new children.
void prune(Polyblock& t, std::span<const double> lower_bounds, std::size_t first_unchecked = 0);

struct IterationRecord {
    std::size_t iteration = 0;
    double upper_bound = 0.0;  // f(z_k)
    double incumbent = -std::numeric_limits<double>::infinity();  // Q_k
    double gap = std::numeric_limits<double>::infinity();
    std::size_t num_vertices = 0;
};

struct SolveOutcome {
    Point best_point;  // empty when no feasible point was found
    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::vector<IterationRecord> trace;
    SolveStatus status = SolveStatus::infeasible;
    Termination termination = Termination::none;

    bool has_point() const { return !best_point.empty(); }
};

struct MonotoneProblem {
    MembershipOracle in_g;
    Point lower_bounds;
    Objective objective;
    Point initial_vertex;
};

/// Read-only view handed to an observer after every iteration.
struct IterationView {
    const IterationRecord& record;
    const Polyblock& polyblock;
    std::span<const double> selected_vertex;
};
using SolveObserver = std::function<void(const IterationView&)>;

SolveOutcome solve(const MembershipOracle& in_g, std::span<const double> lower_bounds, const Objective& objective,
                   std::span<const double> initial_vertex, const SolverConfig& config,
                   const SolveObserver& observer = {});

SolveOutcome solve(const MonotoneProblem& problem, const SolverConfig& config, const SolveObserver& observer = {});

}  // namespace nomaqos
