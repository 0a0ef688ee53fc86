#include "baker/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "baker/errors.hpp"

namespace baker {

namespace {

struct ExperimentInfo {
    Experiment id;
    const char* name;
    bool quantizations;
    bool ensembles;
};

constexpr ExperimentInfo kExperiments[] = {
    {Experiment::GapRatioScan, "gapratio-scan", true, true},
    {Experiment::SpacingHist, "spacing-hist", true, true},
    {Experiment::Sff, "sff", true, true},
    {Experiment::SlopeScan, "slope-scan", true, false},
    {Experiment::Persistence, "persistence", true, true},
    {Experiment::CommutatorScan, "commutator-scan", true, false},
    {Experiment::Husimi, "husimi", true, false},
    {Experiment::Interpolation, "interpolation", false, true},
    {Experiment::OrbitCheck, "orbit-check", true, false},
    {Experiment::PhaseSweep, "phase-sweep", true, false},
};

const ExperimentInfo& info(Experiment e) {
    for (const ExperimentInfo& i : kExperiments) {
        if (i.id == e) {
            return i;
        }
    }
    throw InvalidSpec("unknown experiment");
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
    if (node.Mark().line >= 0) {
        throw InvalidSpec("manifest line " + std::to_string(node.Mark().line + 1) + ": " + what);
    }
    throw InvalidSpec("manifest: " + what);
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, "bad value for '" + key + "'");
    }
}

// A list, a single scalar, or a {from, to, step} range.
std::vector<std::size_t> dims(const YAML::Node& spec) {
    if (!spec["N"]) {
        fail(spec, "missing N");
    }
    const YAML::Node node = spec["N"];
    std::vector<std::size_t> out;
    if (node.IsScalar()) {
        out.push_back(scalar<std::size_t>(node, "N"));
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            out.push_back(scalar<std::size_t>(item, "N"));
        }
    } else if (node.IsMap()) {
        const auto from = scalar<std::size_t>(node["from"], "N.from");
        const auto to = scalar<std::size_t>(node["to"], "N.to");
        const auto step = node["step"] ? scalar<std::size_t>(node["step"], "N.step") : 1;
        if (step == 0 || to < from) {
            fail(node, "N range needs from <= to and step >= 1");
        }
        for (std::size_t n = from; n <= to; n += step) {
            out.push_back(n);
        }
    } else {
        fail(node, "missing N");
    }
    return out;
}

std::vector<double> reals(const YAML::Node& node, const std::string& key) {
    std::vector<double> out;
    if (node.IsScalar()) {
        out.push_back(scalar<double>(node, key));
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            out.push_back(scalar<double>(item, key));
        }
    } else {
        fail(node, "bad value for '" + key + "'");
    }
    return out;
}

void check_keys(const YAML::Node& node, std::initializer_list<const char*> keys) {
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            fail(kv.first, "unknown key '" + key + "'");
        }
    }
}

void expand_quantization(const YAML::Node& node, std::size_t entry, std::uint64_t seed, std::vector<RunSpec>& out) {
    check_keys(node, {"family", "A", "N", "theta", "alpha", "alpha_seed"});
    const Family family = parse_family(scalar<std::string>(node["family"], "family"));
    if (!node["A"]) {
        fail(node, "quantization spec needs A");
    }
    const int base = scalar<int>(node["A"], "A");
    double theta1 = 0.0;
    double theta2 = 0.0;
    if (node["theta"]) {
        const std::vector<double> th = reals(node["theta"], "theta");
        if (th.size() != 2) {
            fail(node["theta"], "theta needs two values");
        }
        theta1 = th[0];
        theta2 = th[1];
        if (family != Family::Generic) {
            const auto pinned = QuantizationSpec::standard(family, std::max(base, 2), 2);
            if (pinned.theta1 != theta1 || pinned.theta2 != theta2) {
                fail(node["theta"], std::string(to_string(family)) + " fixes theta");
            }
        }
    }
    for (std::size_t n : dims(node)) {
        QuantizationSpec s;
        if (node["alpha_seed"]) {
            s = QuantizationSpec::random_phases(family, base, n, scalar<std::uint64_t>(node["alpha_seed"], "alpha_seed"),
                                                theta1, theta2);
        } else if (!node["alpha"] || (node["alpha"].IsScalar() && node["alpha"].as<std::string>() == "standard")) {
            s = QuantizationSpec::standard(family, base, n, theta1, theta2);
        } else if (node["alpha"].IsScalar() && node["alpha"].as<std::string>() == "random") {
            // one draw per entry, shared across its N values
            const std::uint64_t derived = seed * 1000003ULL + entry;
            s = QuantizationSpec::random_phases(family, base, n, derived, theta1, theta2);
        } else {
            s = QuantizationSpec::with_phases(family, base, n, reals(node["alpha"], "alpha"), theta1, theta2);
        }
        out.emplace_back(std::move(s));
    }
}

void expand_ensemble(const YAML::Node& node, std::size_t entry, std::uint64_t seed, std::vector<RunSpec>& out) {
    check_keys(node, {"ensemble", "N", "t_interp", "seed", "samples"});
    const EnsembleKind kind = parse_ensemble_kind(scalar<std::string>(node["ensemble"], "ensemble"));
    std::vector<double> ts{0.0};
    if (node["t_interp"]) {
        ts = reals(node["t_interp"], "t_interp");
    }
    const std::uint64_t first = node["seed"] ? scalar<std::uint64_t>(node["seed"], "seed") : seed * 1000003ULL + entry;
    const int samples = node["samples"] ? scalar<int>(node["samples"], "samples") : 1;
    if (samples < 1) {
        fail(node, "samples must be positive");
    }
    for (std::size_t n : dims(node)) {
        for (double t : ts) {
            for (int k = 0; k < samples; ++k) {
                EnsembleSpec s;
                s.kind = kind;
                s.n = n;
                s.t_interp = t;
                s.seed = first + static_cast<std::uint64_t>(k);
                out.emplace_back(s);
            }
        }
    }
}

nlohmann::json to_json(const YAML::Node& node) {
    if (node.IsMap()) {
        nlohmann::json obj = nlohmann::json::object();
        for (const auto& kv : node) {
            obj[kv.first.as<std::string>()] = to_json(kv.second);
        }
        return obj;
    }
    if (node.IsSequence()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& item : node) {
            arr.push_back(to_json(item));
        }
        return arr;
    }
    if (node.IsNull()) {
        return nullptr;
    }
    const auto text = node.as<std::string>();
    long long i = 0;
    double d = 0.0;
    if (YAML::convert<long long>::decode(node, i)) {
        return i;
    }
    if (YAML::convert<double>::decode(node, d)) {
        return d;
    }
    if (text == "true" || text == "false") {
        return text == "true";
    }
    return text;
}

} // namespace

std::string_view to_string(Experiment experiment) {
    return info(experiment).name;
}

Experiment parse_experiment(std::string_view name) {
    for (const ExperimentInfo& i : kExperiments) {
        if (name == i.name) {
            return i.id;
        }
    }
    throw InvalidSpec("unknown experiment '" + std::string(name) + "'");
}

std::string canonical(const RunSpec& spec) {
    return std::visit([](const auto& s) { return s.canonical(); }, spec);
}

std::size_t spec_dim(const RunSpec& spec) {
    return std::visit([](const auto& s) { return s.n; }, spec);
}

const std::vector<std::string>& allowed_params(Experiment experiment) {
    static const std::vector<std::string> none;
    static const std::vector<std::string> hist{"bins", "max"};
    static const std::vector<std::string> sff{"ell", "max_time"};
    static const std::vector<std::string> slope{"ell", "fit_points", "residual_threshold", "residual_norm",
                                                "smoothing_radius"};
    static const std::vector<std::string> persistence{"max_time", "cutoff", "epsilon", "slack"};
    static const std::vector<std::string> commutator{"grid", "grid_q", "grid_p"};
    static const std::vector<std::string> husimi{"grid", "eigen_indices", "sigma"};
    static const std::vector<std::string> interp{"ell", "fit_points", "residual_threshold", "residual_norm"};
    static const std::vector<std::string> orbit{"t_max"};
    static const std::vector<std::string> sweep{"alpha1_from", "alpha1_to", "alpha1_step", "ell", "fit_points",
                                                "residual_threshold", "residual_norm"};
    switch (experiment) {
    case Experiment::GapRatioScan:
        return none;
    case Experiment::SpacingHist:
        return hist;
    case Experiment::Sff:
        return sff;
    case Experiment::SlopeScan:
        return slope;
    case Experiment::Persistence:
        return persistence;
    case Experiment::CommutatorScan:
        return commutator;
    case Experiment::Husimi:
        return husimi;
    case Experiment::Interpolation:
        return interp;
    case Experiment::OrbitCheck:
        return orbit;
    case Experiment::PhaseSweep:
        return sweep;
    }
    return none;
}

void ExperimentManifest::validate() const {
    if (specs.empty()) {
        throw InvalidSpec("manifest has no specs");
    }
    if (jobs < 1) {
        throw InvalidSpec("jobs must be at least 1");
    }
    const ExperimentInfo& e = info(experiment);
    for (const RunSpec& spec : specs) {
        const bool quant = std::holds_alternative<QuantizationSpec>(spec);
        if (quant && !e.quantizations) {
            throw InvalidSpec(std::string(e.name) + " does not take quantization specs");
        }
        if (!quant && !e.ensembles) {
            throw InvalidSpec(std::string(e.name) + " does not take ensemble specs");
        }
    }
    if (!params.is_object()) {
        throw InvalidSpec("params must be a mapping");
    }
    const auto& allowed = allowed_params(experiment);
    for (const auto& item : params.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw InvalidSpec("parameter '" + item.key() + "' is not used by " + e.name);
        }
    }
}

ExperimentManifest parse_manifest(std::string_view text, std::optional<std::uint64_t> seed) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& ex) {
        throw InvalidSpec(std::string("manifest is not valid YAML: ") + ex.what());
    }
    if (!root.IsMap()) {
        throw InvalidSpec("manifest must be a mapping");
    }
    check_keys(root, {"experiment", "specs", "params", "output_dir", "seed", "jobs", "cache_dir"});
    ExperimentManifest m;
    if (!root["experiment"]) {
        throw InvalidSpec("manifest needs an experiment");
    }
    m.experiment = parse_experiment(scalar<std::string>(root["experiment"], "experiment"));
    if (seed) {
        m.seed = *seed;
    } else if (root["seed"]) {
        m.seed = scalar<std::uint64_t>(root["seed"], "seed");
    }
    if (root["jobs"]) {
        m.jobs = scalar<int>(root["jobs"], "jobs");
    }
    if (root["output_dir"]) {
        m.output_dir = scalar<std::string>(root["output_dir"], "output_dir");
    }
    if (root["cache_dir"]) {
        m.cache_dir = scalar<std::string>(root["cache_dir"], "cache_dir");
    }
    if (root["params"]) {
        if (!root["params"].IsMap()) {
            fail(root["params"], "params must be a mapping");
        }
        m.params = to_json(root["params"]);
    }
    const YAML::Node specs = root["specs"];
    if (specs && !specs.IsSequence()) {
        fail(specs, "specs must be a list");
    }
    if (specs) {
        std::size_t entry = 0;
        for (const auto& node : specs) {
            if (!node.IsMap()) {
                fail(node, "each spec must be a mapping");
            }
            try {
                if (node["ensemble"]) {
                    expand_ensemble(node, entry, m.seed, m.specs);
                } else if (node["family"]) {
                    expand_quantization(node, entry, m.seed, m.specs);
                } else {
                    fail(node, "spec needs a family or an ensemble");
                }
            } catch (const InvalidSpec&) {
                throw;
            } catch (const Error& ex) {
                fail(node, ex.what());
            } catch (const YAML::Exception& ex) {
                fail(node, ex.what());
            }
            ++entry;
        }
    }
    m.validate();
    return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path, std::optional<std::uint64_t> seed) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidSpec("cannot read manifest " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_manifest(text.str(), seed);
}

} // namespace baker
