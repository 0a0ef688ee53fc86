#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baker/errors.hpp"
#include "baker/io.hpp"
#include "baker/manifest.hpp"
#include "baker/quantizer.hpp"
#include "baker/rmt.hpp"
#include "baker/runner.hpp"

namespace {

struct Common {
    std::string manifest;
    std::string out;
    std::optional<int> jobs;
    std::optional<std::uint64_t> seed;
    std::string cache;
    bool quiet = false;
};

struct InlineSpec {
    std::string family;
    int base = 2;
    std::vector<std::size_t> n;
    std::vector<double> theta;
    std::string alpha;
    std::optional<std::uint64_t> alpha_seed;
    std::string ensemble;
    std::vector<double> t_interp;
    int samples = 1;
};

struct Tunables {
    std::optional<int> ell;
    std::optional<int> fit_points;
    std::optional<double> residual_threshold;
    std::string residual_norm;
};

std::vector<double> split_reals(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) {
            throw baker::InvalidSpec("bad number '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<baker::RunSpec> inline_specs(const InlineSpec& in, std::uint64_t seed) {
    std::vector<baker::RunSpec> specs;
    if (in.n.empty()) {
        throw baker::InvalidSpec("give --manifest or at least one -N");
    }
    if (!in.ensemble.empty()) {
        const baker::EnsembleKind kind = baker::parse_ensemble_kind(in.ensemble);
        const std::vector<double> ts = in.t_interp.empty() ? std::vector<double>{0.0} : in.t_interp;
        for (std::size_t n : in.n) {
            for (double t : ts) {
                for (int k = 0; k < in.samples; ++k) {
                    specs.emplace_back(baker::EnsembleSpec{kind, n, t, seed * 1000003ULL + static_cast<std::uint64_t>(k)});
                }
            }
        }
        return specs;
    }
    if (in.family.empty()) {
        throw baker::InvalidSpec("give --manifest, --family or --ensemble");
    }
    const baker::Family family = baker::parse_family(in.family);
    double t1 = 0.0;
    double t2 = 0.0;
    if (!in.theta.empty()) {
        if (in.theta.size() != 2) {
            throw baker::InvalidSpec("--theta needs two values");
        }
        t1 = in.theta[0];
        t2 = in.theta[1];
    } else {
        const auto pinned = baker::QuantizationSpec::standard(family, in.base, 2);
        t1 = pinned.theta1;
        t2 = pinned.theta2;
    }
    for (std::size_t n : in.n) {
        if (in.alpha_seed) {
            specs.emplace_back(baker::QuantizationSpec::random_phases(family, in.base, n, *in.alpha_seed, t1, t2));
        } else if (in.alpha.empty() || in.alpha == "standard") {
            specs.emplace_back(baker::QuantizationSpec::standard(family, in.base, n, t1, t2));
        } else if (in.alpha == "random") {
            specs.emplace_back(baker::QuantizationSpec::random_phases(family, in.base, n, seed * 1000003ULL, t1, t2));
        } else {
            specs.emplace_back(baker::QuantizationSpec::with_phases(family, in.base, n, split_reals(in.alpha), t1, t2));
        }
    }
    return specs;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--manifest", c.manifest, "Experiment manifest (YAML)");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--cache", c.cache, "Spectrum cache directory");
    cmd->add_flag("-q,--quiet", c.quiet, "No per-spec progress");
}

void add_inline(CLI::App* cmd, InlineSpec& s) {
    cmd->add_option("--family", s.family, "BalazsVoros, Saraceno, Generic or ShorBaker");
    cmd->add_option("-A,--base", s.base, "Base A");
    cmd->add_option("-N,--dim", s.n, "Hilbert space dimension (repeatable)");
    cmd->add_option("--theta", s.theta, "Boundary phases theta1 theta2")->expected(2);
    cmd->add_option("--alpha", s.alpha, "Block phases: comma list, 'standard' or 'random'");
    cmd->add_option("--alpha-seed", s.alpha_seed, "Seed for random block phases");
    cmd->add_option("--ensemble", s.ensemble, "Ensemble kind instead of a quantization");
    cmd->add_option("--t-interp", s.t_interp, "Interpolation parameters (repeatable)");
    cmd->add_option("--samples", s.samples, "Ensemble samples per N")->check(CLI::PositiveNumber);
}

void add_tunables(CLI::App* cmd, Tunables& t) {
    cmd->add_option("--ell", t.ell, "SFF averaging half-width");
    cmd->add_option("--fit-points", t.fit_points, "Points in the slope fit");
    cmd->add_option("--residual-threshold", t.residual_threshold, "Outlier threshold on the fit residual");
    cmd->add_option("--residual-norm", t.residual_norm, "sum-of-squares, l2 or rms");
}

// Without an experiment the manifest decides (the `run` verb).
baker::ExperimentManifest make_manifest(std::optional<baker::Experiment> experiment, const Common& c,
                                        const InlineSpec& s, const Tunables& t) {
    baker::ExperimentManifest m;
    if (!c.manifest.empty()) {
        m = baker::load_manifest(c.manifest, c.seed);
        if (experiment && m.experiment != *experiment) {
            throw baker::InvalidSpec("manifest is for " + std::string(baker::to_string(m.experiment)) +
                                     ", not " + std::string(baker::to_string(*experiment)));
        }
    } else {
        m.experiment = *experiment;
        m.seed = c.seed.value_or(0);
        m.specs = inline_specs(s, m.seed);
    }
    if (!c.out.empty()) {
        m.output_dir = c.out;
    }
    if (!c.cache.empty()) {
        m.cache_dir = c.cache;
    }
    if (c.jobs) {
        m.jobs = *c.jobs;
    }
    if (t.ell) {
        m.params["ell"] = *t.ell;
    }
    if (t.fit_points) {
        m.params["fit_points"] = *t.fit_points;
    }
    if (t.residual_threshold) {
        m.params["residual_threshold"] = *t.residual_threshold;
    }
    if (!t.residual_norm.empty()) {
        m.params["residual_norm"] = t.residual_norm;
    }
    m.validate();
    return m;
}

int execute(const baker::ExperimentManifest& m, bool quiet) {
    baker::RunOptions opts;
    if (!quiet) {
        opts.log = &std::cerr;
    }
    const baker::RunSummary r = baker::run(m, opts);
    for (const auto& f : r.files) {
        std::cout << f.string() << '\n';
    }
    std::cerr << r.jobs_run << " jobs, " << r.failures << " failed, " << r.cache_hits << " cache hits, "
              << r.eigensolves << " eigensolves\n";
    return r.failures == 0 ? 0 : 3;
}

baker::QuantizationSpec single_quantization(const InlineSpec& s, std::uint64_t seed) {
    const auto specs = inline_specs(s, seed);
    if (specs.size() != 1 || !std::holds_alternative<baker::QuantizationSpec>(specs.front())) {
        throw baker::InvalidSpec("expected exactly one quantization spec");
    }
    auto q = std::get<baker::QuantizationSpec>(specs.front());
    q.validate();
    return q;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantized baker's map spectral toolkit"};
    app.require_subcommand(1);

    Common common;
    InlineSpec spec;
    Tunables tune;

    std::string build_out = "map.bin";
    auto* build = app.add_subcommand("build", "Write the position-basis matrix of one quantization");
    add_inline(build, spec);
    build->add_option("--seed", common.seed, "Seed for --alpha random");
    build->add_option("-o,--output", build_out, "Binary matrix file");

    std::string spectrum_out;
    bool with_vectors = false;
    auto* spectrum = app.add_subcommand("spectrum", "Print the sorted eigenangles of one spec as CSV");
    add_inline(spectrum, spec);
    spectrum->add_option("--seed", common.seed, "Seed for random phases or ensembles");
    spectrum->add_option("--cache", common.cache, "Spectrum cache directory");
    spectrum->add_option("-o,--output", spectrum_out, "CSV file (default stdout)");

    struct Verb {
        const char* name;
        baker::Experiment experiment;
        const char* help;
    };
    const std::vector<Verb> verbs = {
        {"run", baker::Experiment::GapRatioScan, "Run any manifest"},
        {"gapratio", baker::Experiment::GapRatioScan, "Mean gap ratios"},
        {"spacing-hist", baker::Experiment::SpacingHist, "Level spacing histograms"},
        {"sff", baker::Experiment::Sff, "Time-averaged spectral form factor"},
        {"slope-scan", baker::Experiment::SlopeScan, "Early-time SFF slope over N"},
        {"persistence", baker::Experiment::Persistence, "Persistence z^2(t) and cyclic ergodicity"},
        {"commutator-scan", baker::Experiment::CommutatorScan, "Fourier reflection defect grid"},
        {"husimi", baker::Experiment::Husimi, "Husimi densities of eigenvectors"},
        {"interpolate", baker::Experiment::Interpolation, "Geodesic ensemble interpolation"},
        {"orbit-check", baker::Experiment::OrbitCheck, "Periodic orbit traces against exact traces"},
        {"phase-sweep", baker::Experiment::PhaseSweep, "Sweep alpha_1 for A = 2"},
    };
    std::vector<CLI::App*> verb_cmds;
    for (const Verb& v : verbs) {
        auto* cmd = app.add_subcommand(v.name, v.help);
        add_common(cmd, common);
        if (std::string(v.name) == "run") {
            cmd->get_option("--manifest")->required();
        } else {
            add_inline(cmd, spec);
        }
        add_tunables(cmd, tune);
        verb_cmds.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            const auto q = single_quantization(spec, common.seed.value_or(0));
            baker::io::write_matrix_file(build_out, baker::build_map(q).entries());
            std::cout << build_out << '\n';
            return 0;
        }
        if (spectrum->parsed()) {
            const auto specs = inline_specs(spec, common.seed.value_or(0));
            if (specs.size() != 1) {
                throw baker::InvalidSpec("expected exactly one spec");
            }
            std::visit([](const auto& s) { s.validate(); }, specs.front());
            std::optional<std::filesystem::path> dir;
            if (!common.cache.empty()) {
                dir = common.cache;
            }
            baker::SpectrumCache cache(dir);
            const baker::SpectrumData data = cache.get(baker::canonical(specs.front()), false, [&] {
                if (const auto* q = std::get_if<baker::QuantizationSpec>(&specs.front())) {
                    return baker::eigendecompose(baker::build_map(*q), false);
                }
                return baker::eigendecompose(baker::sample(std::get<baker::EnsembleSpec>(specs.front())), false);
            });
            if (spectrum_out.empty()) {
                baker::io::write_spectrum_csv(std::cout, data);
            } else {
                std::ofstream f(spectrum_out);
                if (!f) {
                    throw baker::PreconditionError("cannot write " + spectrum_out);
                }
                baker::io::write_spectrum_csv(f, data);
            }
            return 0;
        }
        for (std::size_t k = 0; k < verbs.size(); ++k) {
            if (!verb_cmds[k]->parsed()) {
                continue;
            }
            std::optional<baker::Experiment> experiment;
            if (std::string(verbs[k].name) != "run") {
                experiment = verbs[k].experiment;
            }
            const baker::ExperimentManifest m = make_manifest(experiment, common, spec, tune);
            return execute(m, common.quiet);
        }
    } catch (const baker::Error& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 1;
}
