#include "nomaqos/poa_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nomaqos {

namespace {

// Componentwise a >= b.
bool dominates(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) {
            return false;
        }
    }
    return true;
}

bool equal_points(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

struct RayBracket {
    double lo;  // lo * z in G
    double hi;  // hi * z not in G
};

// Bisection on the ray parameter for a z known to lie outside G. The bracket
// is first located by halving so that the fixed bisection count also gives a
// relative precision of eps/4 on lambda, not only an absolute one.
RayBracket bracket_ray(std::span<const double> z, const MembershipOracle& in_g, double eps_proj) {
    Point buffer(z.size());
    auto feasible = [&](double a) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            buffer[i] = a * z[i];
        }
        return in_g(buffer);
    };

    double hi = 1.0;
    double lo = 0.5;
    int halvings = 0;
    while (!feasible(lo)) {
        hi = lo;
        lo *= 0.5;
        if (++halvings > 1100) {
            return {0.0, hi};
        }
    }
    const int steps = static_cast<int>(std::ceil(std::log2(1.0 / eps_proj))) + 2;
    for (int k = 0; k < steps; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

Point scaled(std::span<const double> z, double a) {
    Point out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = a * z[i];
    }
    return out;
}

void check_point(std::span<const double> z, const char* what) {
    for (double v : z) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": components must be finite and nonnegative");
        }
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("solver delta must be positive");
    }
    if (!(eps_proj > 0.0) || eps_proj > delta / 10.0) {
        throw std::invalid_argument("solver eps_proj must be positive and at most delta/10");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("solver max_iter must be at least 1");
    }
    if (!(value_tol >= 0.0)) {
        throw std::invalid_argument("solver value_tol must be nonnegative");
    }
    if (max_vertices < 1) {
        throw std::invalid_argument("solver max_vertices must be at least 1");
    }
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::iteration_cap: return "iteration_cap";
        case SolveStatus::vertex_cap: return "vertex_cap";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

std::string_view to_string(Termination termination) {
    switch (termination) {
        case Termination::none: return "none";
        case Termination::feasible_vertex: return "feasible_vertex";
        case Termination::bound_met: return "bound_met";
        case Termination::gap: return "gap";
        case Termination::polyblock_exhausted: return "polyblock_exhausted";
    }
    return "unknown";
}

Polyblock::Polyblock(std::size_t dimension, Objective objective)
    : dimension_(dimension), objective_(std::move(objective)) {
    if (dimension_ == 0) {
        throw std::invalid_argument("polyblock dimension must be positive");
    }
}

Polyblock::Polyblock(std::vector<Point> vertices, Objective objective)
    : Polyblock(vertices.empty() ? 0 : vertices.front().size(), std::move(objective)) {
    for (const auto& v : vertices) {
        insert(v);
    }
}

std::vector<Point> Polyblock::vertices() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        const auto v = vertex(i);
        out.emplace_back(v.begin(), v.end());
    }
    return out;
}

void Polyblock::insert(std::span<const double> z) {
    if (z.size() != dimension_) {
        throw std::invalid_argument("polyblock vertex has wrong dimension");
    }
    values_.push_back(objective_(z));
    coords_.insert(coords_.end(), z.begin(), z.end());
}

void Polyblock::erase(std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end(), std::greater<>());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (std::size_t i : indices) {
        const std::size_t last = values_.size() - 1;
        if (i != last) {
            std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(last * dimension_), dimension_,
                        coords_.begin() + static_cast<std::ptrdiff_t>(i * dimension_));
            values_[i] = values_[last];
        }
        values_.pop_back();
        coords_.resize(last * dimension_);
    }
}

bool Polyblock::is_proper() const {
    for (std::size_t a = 0; a < size(); ++a) {
        for (std::size_t b = 0; b < size(); ++b) {
            if (a != b && dominates(vertex(b), vertex(a))) {
                return false;
            }
        }
    }
    return true;
}

bool Polyblock::covers(std::span<const double> y) const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (dominates(vertex(i), y)) {
            return true;
        }
    }
    return false;
}

Point project_to_boundary(std::span<const double> z, const MembershipOracle& in_g, double eps_proj) {
    check_point(z, "project_to_boundary");
    if (std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; })) {
        throw std::invalid_argument("project_to_boundary: cannot project the origin");
    }
    if (!(eps_proj > 0.0)) {
        throw std::invalid_argument("project_to_boundary: eps_proj must be positive");
    }
    if (in_g(z)) {
        return Point(z.begin(), z.end());
    }
    return scaled(z, bracket_ray(z, in_g, eps_proj).lo);
}

std::size_t select_best_vertex(const Polyblock& t) {
    if (t.empty()) {
        throw std::out_of_range("select_best_vertex: empty vertex set");
    }
    std::size_t best = 0;
    double best_sum = std::accumulate(t.vertex(0).begin(), t.vertex(0).end(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double v = t.value(i);
        if (v < t.value(best)) {
            continue;
        }
        const double sum = std::accumulate(t.vertex(i).begin(), t.vertex(i).end(), 0.0);
        if (v == t.value(best)) {
            if (sum < best_sum) {
                continue;
            }
            if (sum == best_sum &&
                !std::lexicographical_compare(t.vertex(best).begin(), t.vertex(best).end(), t.vertex(i).begin(),
                                              t.vertex(i).end())) {
                continue;
            }
        }
        best = i;
        best_sum = sum;
    }
    return best;
}

std::size_t expand_vertex_set(Polyblock& t, std::span<const double> z_best, std::span<const double> x_proj) {
    const std::size_t n = t.dimension();
    if (z_best.size() != n || x_proj.size() != n) {
        throw std::invalid_argument("expand_vertex_set: dimension mismatch");
    }
    if (!dominates(z_best, x_proj) || equal_points(z_best, x_proj)) {
        throw std::invalid_argument("expand_vertex_set: x_proj must lie strictly below z_best");
    }

    // A vertex is cut when its box meets the cone above x_proj. Along
    // coordinates where z_best itself touches x_proj (zero coordinates of a
    // ray projection) a tie is enough.
    std::vector<char> tie_ok(n);
    for (std::size_t i = 0; i < n; ++i) {
        tie_ok[i] = z_best[i] <= x_proj[i];
    }
    auto is_cut = [&](std::span<const double> v) {
        for (std::size_t i = 0; i < n; ++i) {
            if (tie_ok[i] ? v[i] < x_proj[i] : v[i] <= x_proj[i]) {
                return false;
            }
        }
        return true;
    };

    std::vector<std::size_t> removed;
    std::vector<Point> children;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto v = t.vertex(k);
        if (!is_cut(v)) {
            continue;
        }
        removed.push_back(k);
        for (std::size_t i = 0; i < n; ++i) {
            if (x_proj[i] < v[i]) {
                Point child(v.begin(), v.end());
                child[i] = x_proj[i];
                children.push_back(std::move(child));
            }
        }
    }
    t.erase(std::move(removed));
    const std::size_t first_child = t.size();
    for (const auto& c : children) {
        t.insert(c);
    }
    return first_child;
}

void prune(Polyblock& t, std::span<const double> lower_bounds, std::size_t first_unchecked) {
    if (lower_bounds.size() != t.dimension()) {
        throw std::invalid_argument("prune: lower bound dimension mismatch");
    }
    const std::size_t total = t.size();
    const std::size_t n = t.dimension();
    std::vector<bool> keep(total, true);
    Point floor(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = first_unchecked; c < total; ++c) {
        const auto cand = t.vertex(c);
        if (!dominates(cand, lower_bounds)) {
            keep[c] = false;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            floor[i] = std::min(floor[i], cand[i]);
        }
    }
    // Anything dominating a candidate also dominates the floor.
    std::vector<std::size_t> pool;
    for (std::size_t d = 0; d < total; ++d) {
        if (dominates(t.vertex(d), floor)) {
            pool.push_back(d);
        }
    }
    for (std::size_t c = first_unchecked; c < total; ++c) {
        if (!keep[c]) {
            continue;
        }
        const auto cand = t.vertex(c);
        for (std::size_t d : pool) {
            if (d == c) {
                continue;
            }
            const auto other = t.vertex(d);
            if (!dominates(other, cand)) {
                continue;
            }
            // Equal points: keep the first occurrence only.
            if (!equal_points(other, cand) || d < c) {
                keep[c] = false;
                break;
            }
        }
    }
    std::vector<std::size_t> removed;
    for (std::size_t c = first_unchecked; c < total; ++c) {
        if (!keep[c]) {
            removed.push_back(c);
        }
    }
    t.erase(std::move(removed));
}

SolveOutcome solve(const MembershipOracle& in_g, std::span<const double> lower_bounds, const Objective& objective,
                   std::span<const double> initial_vertex, const SolverConfig& config,
                   const SolveObserver& observer) {
    config.validate();
    const std::size_t n = initial_vertex.size();
    if (n == 0 || lower_bounds.size() != n) {
        throw std::invalid_argument("solve: initial vertex and lower bounds must share a positive dimension");
    }
    check_point(initial_vertex, "solve initial vertex");

    SolveOutcome out;
    // G is normal, so G ∩ H is empty exactly when the corner of H is outside G.
    if (!dominates(initial_vertex, lower_bounds) || !in_g(lower_bounds)) {
        out.status = SolveStatus::infeasible;
        return out;
    }

    Point scale(initial_vertex.begin(), initial_vertex.end());
    for (double& s : scale) {
        if (s <= 0.0) {
            s = 1.0;
        }
    }
    auto gap_to = [&](std::span<const double> z, std::span<const double> x) {
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            g = std::max(g, std::abs(z[i] - x[i]) / scale[i]);
        }
        return g;
    };

    Polyblock t(n, objective);
    t.insert(initial_vertex);

    Point incumbent;
    double incumbent_value = -std::numeric_limits<double>::infinity();

    auto finish = [&](SolveStatus status, Termination term) {
        out.best_point = incumbent;
        out.best_value = incumbent.empty() ? -std::numeric_limits<double>::infinity() : incumbent_value;
        out.status = status;
        out.termination = term;
        return out;
    };

    for (std::size_t k = 1; k <= config.max_iter; ++k) {
        if (t.empty()) {
            return incumbent.empty() ? finish(SolveStatus::infeasible, Termination::none)
                                     : finish(SolveStatus::converged, Termination::polyblock_exhausted);
        }
        out.iterations = k;
        const std::size_t best = select_best_vertex(t);
        const Point z(t.vertex(best).begin(), t.vertex(best).end());
        const double upper = t.value(best);

        IterationRecord rec;
        rec.iteration = k;
        rec.upper_bound = upper;

        auto emit = [&]() {
            rec.incumbent = incumbent.empty() ? -std::numeric_limits<double>::infinity() : incumbent_value;
            rec.gap = incumbent.empty() ? std::numeric_limits<double>::infinity() : gap_to(z, incumbent);
            rec.num_vertices = t.size();
            out.trace.push_back(rec);
            if (observer) {
                observer(IterationView{out.trace.back(), t, z});
            }
        };

        if (in_g(z)) {
            // Every vertex is in H after pruning, so z is feasible and optimal.
            incumbent = z;
            incumbent_value = upper;
            emit();
            return finish(SolveStatus::converged, Termination::feasible_vertex);
        }

        const RayBracket ray = bracket_ray(z, in_g, config.eps_proj);
        Point x = scaled(z, ray.lo);
        if (dominates(x, lower_bounds)) {
            const double value = objective(x);
            if (value >= incumbent_value) {
                incumbent = x;
                incumbent_value = value;
            }
        }

        if (!incumbent.empty() && upper - incumbent_value <= config.value_tol * std::abs(upper)) {
            emit();
            return finish(SolveStatus::converged, Termination::bound_met);
        }

        // Cut at the infeasible end of the bracket: everything strictly above
        // it is outside G, so the polyblock keeps containing G ∩ H exactly.
        const Point cut = scaled(z, ray.hi < 1.0 ? ray.hi : ray.lo);
        const std::size_t first_child = expand_vertex_set(t, z, cut);
        prune(t, lower_bounds, first_child);

        emit();
        if (rec.gap <= config.delta) {
            return finish(SolveStatus::converged, Termination::gap);
        }
        if (t.size() > config.max_vertices) {
            return finish(SolveStatus::vertex_cap, Termination::none);
        }
    }
    return finish(SolveStatus::iteration_cap, Termination::none);
}

SolveOutcome solve(const MonotoneProblem& problem, const SolverConfig& config, const SolveObserver& observer) {
    return solve(problem.in_g, problem.lower_bounds, problem.objective, problem.initial_vertex, config, observer);
}

}  // namespace nomaqos
