#pragma once

#include <array>
#include <functional>
#include <string>

#include "cso/coupling.hpp"
#include "cso/demand.hpp"
#include "cso/metrics.hpp"
#include "cso/net_model.hpp"

namespace cso {

enum class ObjectivePair { F1F2, F1F3, F1F4, F5F6 };
enum class Sense { Minimize, Maximize };

std::array<Sense, 2> senses_of(ObjectivePair pair);
std::string to_string(ObjectivePair pair);
/// Accepts "f1f2", "f1f3", "f1f4", "f5f6". Throws ConfigError otherwise.
ObjectivePair parse_objective_pair(const std::string& text);

/// Objective pair of one topology in natural units and senses.
struct Evaluation {
    std::array<double, 2> objectives{0.0, 0.0};
    bool feasible{false};
    double outage_fraction{1.0};
};

/// Black-box view of a bi-objective topology problem, as consumed by the optimizers.
struct ProblemView {
    std::size_t num_cells{0};
    std::array<Sense, 2> senses{Sense::Minimize, Sense::Minimize};
    std::function<Evaluation(const Topology&)> evaluate;
};

struct ProblemSettings {
    ObjectivePair pair{ObjectivePair::F1F2};
    double kappa_cov{0.02};
    metrics::UplinkModel uplink{};
    metrics::PowerModel power{};
    coupling::SolveOptions solve{};
};

/// Cell switch-off problem on one network and demand profile. The f1-pairs
/// use full-load interference; (f5, f6) use the load-coupling fixed point at
/// the profile's volume.
class Problem {
public:
    Problem(const net::NetworkModel& model, demand::DemandProfile profile, ProblemSettings settings);

    std::size_t num_cells() const { return model_->num_cells(); }
    const net::NetworkModel& model() const { return *model_; }
    const demand::DemandProfile& profile() const { return profile_; }
    const ProblemSettings& settings() const { return settings_; }
    std::array<Sense, 2> senses() const { return senses_of(settings_.pair); }

    /// Thread-safe.
    Evaluation evaluate(const Topology& topo) const;
    /// All six objectives; f1..f4 under full load, f5/f6 under load coupling.
    /// Feasibility follows the interference model of the configured pair.
    metrics::ObjectiveVector objectives(const Topology& topo) const;

    ProblemView view() const;

private:
    const net::NetworkModel* model_;
    demand::DemandProfile profile_;
    ProblemSettings settings_;
};

}  // namespace cso
