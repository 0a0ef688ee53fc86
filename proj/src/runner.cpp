#include "baker/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "baker/ergodicity.hpp"
#include "baker/errors.hpp"
#include "baker/io.hpp"
#include "baker/orbits.hpp"
#include "baker/phase_space.hpp"
#include "baker/sff.hpp"
#include "baker/spectral_stats.hpp"
#include "baker/symmetry.hpp"

namespace baker {

namespace {

using Row = std::vector<std::string>;
using nlohmann::json;

std::string num(double v) {
    return io::format_double(v);
}

std::string num(std::size_t v) {
    return std::to_string(v);
}

struct JobResult {
    std::vector<Row> rows;
    json summary = json::object();
    std::optional<std::string> error;
};

struct Job {
    std::size_t spec_index = 0;
    RunSpec spec;
    double alpha1 = 0.0;  // phase-sweep only
};

template <typename T>
T param(const json& params, const char* key, T fallback) {
    if (!params.contains(key)) {
        return fallback;
    }
    try {
        return params.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidSpec(std::string("parameter '") + key + "' has the wrong type");
    }
}

std::string strip_field(std::string text, const std::string& field) {
    const auto at = text.find(";" + field + "=");
    if (at == std::string::npos) {
        return text;
    }
    const auto end = text.find(';', at + 1);
    text.erase(at, end == std::string::npos ? std::string::npos : end - at);
    return text;
}

class Context {
public:
    Context(const ExperimentManifest& m, SpectrumCache& cache) : manifest(m), cache_(cache) {}

    SpectrumData spectrum(const RunSpec& spec, bool with_vectors) {
        return cache_.get(canonical(spec), with_vectors, [&] {
            const UnitaryMatrix u = matrix(spec);
            return eigendecompose(u, with_vectors);
        });
    }

    static UnitaryMatrix matrix(const RunSpec& spec) {
        if (const auto* q = std::get_if<QuantizationSpec>(&spec)) {
            return build_map(*q);
        }
        return sample(std::get<EnsembleSpec>(spec));
    }

    SlopeScanParams slope_params() const {
        SlopeScanParams p;
        const json& js = manifest.params;
        if (js.contains("ell")) {
            p.ell = param<int>(js, "ell", 0);
        }
        if (js.contains("fit_points")) {
            p.fit_points = param<int>(js, "fit_points", 0);
        }
        if (js.contains("residual_threshold")) {
            p.threshold = param<double>(js, "residual_threshold", 0.0);
        }
        p.norm = parse_residual_norm(param<std::string>(js, "residual_norm", "rms"));
        p.smoothing_radius = param<double>(js, "smoothing_radius", 10.0);
        return p;
    }

    const ExperimentManifest& manifest;

private:
    SpectrumCache& cache_;
};

int base_of(const RunSpec& spec) {
    if (const auto* q = std::get_if<QuantizationSpec>(&spec)) {
        return q->base;
    }
    return 2;
}

void validate_spec(const RunSpec& spec) {
    std::visit([](const auto& s) { s.validate(); }, spec);
}

// ---- per-experiment jobs ---------------------------------------------------

JobResult gapratio_job(Context& ctx, const Job& job) {
    JobResult r;
    const SpectrumData sp = ctx.spectrum(job.spec, false);
    const double g = mean_gap_ratio(spacings(sp, true));
    r.rows.push_back({num(job.spec_index), group_label(job.spec), num(spec_dim(job.spec)), num(g)});
    r.summary["gap_ratio"] = g;
    return r;
}

JobResult spacing_job(Context& ctx, const Job& job) {
    JobResult r;
    const int bins = param<int>(ctx.manifest.params, "bins", kDefaultBins);
    const double hi = param<double>(ctx.manifest.params, "max", kDefaultHistogramMax);
    const SpacingData s = spacings(ctx.spectrum(job.spec, false), true);
    for (const HistogramBin& b : histogram(s.spacings, bins, 0.0, hi)) {
        r.rows.push_back({num(job.spec_index), num(b.center), num(b.density)});
    }
    return r;
}

JobResult sff_job(Context& ctx, const Job& job) {
    JobResult r;
    const std::size_t n = spec_dim(job.spec);
    const int ell = param<int>(ctx.manifest.params, "ell", default_ell(n));
    const int max_time = param<int>(ctx.manifest.params, "max_time", static_cast<int>(n / 2));
    const SffSeries s = average_sff(sff(ctx.spectrum(job.spec, false), max_time), ell);
    for (std::size_t k = 0; k < s.length(); ++k) {
        const int t = s.times[k];
        r.rows.push_back({num(job.spec_index), std::to_string(t), num(t / static_cast<double>(n)), num(s.raw[k]),
                          num(s.averaged[k])});
    }
    return r;
}

JobResult slope_job(Context& ctx, const Job& job) {
    JobResult r;
    const SlopeFit fit = fit_spectrum(ctx.spectrum(job.spec, false), base_of(job.spec), ctx.slope_params());
    r.summary["slope"] = fit.slope;
    r.summary["residual"] = fit.scaled_residual;
    r.summary["outlier"] = fit.is_outlier;
    return r;
}

JobResult persistence_job(Context& ctx, const Job& job) {
    JobResult r;
    const json& js = ctx.manifest.params;
    const std::size_t n = spec_dim(job.spec);
    const double c = param<double>(js, "cutoff", kDefaultCutoff);
    const int max_time = param<int>(js, "max_time", static_cast<int>(n / 2));
    const PersistenceSeries s = persistence(ctx.spectrum(job.spec, false), max_time, c);
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        r.rows.push_back({num(job.spec_index), std::to_string(s.times[k]), num(s.z2[k]), num(s.z2_coe_ref[k]),
                          num(s.eta2)});
    }
    const ErgodicityVerdict v = cyc_ergodicity_check(s, c, param<double>(js, "epsilon", kDefaultEpsilon),
                                                     param<double>(js, "slack", kDefaultSlack));
    r.summary["above_cutoff"] = v.above_cutoff;
    r.summary["matches_coe"] = v.matches_coe;
    r.summary["min_z2"] = v.min_z2;
    r.summary["worst_coe_gap"] = v.worst_coe_gap;
    r.summary["z2"] = s.z2;
    return r;
}

JobResult commutator_job(Context& ctx, const Job& job) {
    JobResult r;
    const auto& q = std::get<QuantizationSpec>(job.spec);
    const int grid = param<int>(ctx.manifest.params, "grid", 50);
    const int gq = param<int>(ctx.manifest.params, "grid_q", grid);
    const int gp = param<int>(ctx.manifest.params, "grid_p", grid);
    const UnitaryMatrix u = build_map(q);
    double best = INFINITY;
    ReflectionDefect arg;
    for (const ReflectionDefect& d : fourier_reflection_scan(u.entries(), gq, gp)) {
        r.rows.push_back({num(job.spec_index), num(d.omega1), num(d.omega2), num(d.defect)});
        if (d.defect < best) {
            best = d.defect;
            arg = d;
        }
    }
    r.summary["tr_defect"] = tr_defect(q, u);
    r.summary["min_defect"] = best;
    r.summary["argmin"] = {arg.omega1, arg.omega2};
    return r;
}

JobResult husimi_job(Context& ctx, const Job& job) {
    JobResult r;
    const auto& q = std::get<QuantizationSpec>(job.spec);
    const json& js = ctx.manifest.params;
    const auto grid = static_cast<std::size_t>(param<int>(js, "grid", 300));
    const double sigma = param<double>(js, "sigma", 1.0);
    const std::vector<int> indices = param<std::vector<int>>(js, "eigen_indices", std::vector<int>{0});
    const SpectrumData sp = ctx.spectrum(job.spec, true);
    for (int idx : indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= sp.size()) {
            throw PreconditionError("eigen index " + std::to_string(idx) + " out of range");
        }
        const CVector v = sp.eigenvectors->col(idx);
        const HusimiGrid h = husimi(v, grid, grid, q.theta1, q.theta2, sigma);
        for (std::size_t i = 0; i < grid; ++i) {
            for (std::size_t j = 0; j < grid; ++j) {
                r.rows.push_back({num(job.spec_index), std::to_string(idx), num(sp.angles[static_cast<std::size_t>(idx)]),
                                  num(h.q(i)), num(h.p(j)), num(h.at(i, j))});
            }
        }
        r.summary["reflection_l1_" + std::to_string(idx)] = relative_l1(h, h.reflected());
        r.summary["transpose_l1_" + std::to_string(idx)] = relative_l1(h, h.transposed());
    }
    return r;
}

JobResult interpolation_job(Context& ctx, const Job& job) {
    JobResult r;
    const auto& e = std::get<EnsembleSpec>(job.spec);
    const SpectrumData sp = ctx.spectrum(job.spec, false);
    const double g = mean_gap_ratio(spacings(sp, true));
    const SlopeFit fit = fit_spectrum(sp, 2, ctx.slope_params());
    r.rows.push_back({num(job.spec_index), std::string(to_string(e.kind)), num(e.n), num(e.t_interp),
                      std::to_string(e.seed), num(g), num(fit.slope), num(fit.scaled_residual)});
    r.summary["gap_ratio"] = g;
    r.summary["slope"] = fit.slope;
    return r;
}

JobResult orbit_job(Context& ctx, const Job& job) {
    JobResult r;
    const auto& q = std::get<QuantizationSpec>(job.spec);
    const int t_max = param<int>(ctx.manifest.params, "t_max", 4);
    const SpectrumData sp = ctx.spectrum(job.spec, false);
    for (int t = 1; t <= t_max; ++t) {
        const TraceApproximation po = trace_po(q.family, q.base, t, q.n, q.theta1, q.theta2, q.alpha);
        Complex exact = 0.0;
        for (double a : sp.angles) {
            exact += std::polar(1.0, std::fmod(t * a, kTwoPi));
        }
        const double rel = std::abs(po.value - exact) / std::abs(exact);
        r.rows.push_back({num(job.spec_index), std::to_string(t), num(po.value.real()), num(po.value.imag()),
                          num(exact.real()), num(exact.imag()), num(rel)});
    }
    return r;
}

JobResult sweep_job(Context& ctx, const Job& job) {
    JobResult r;
    QuantizationSpec q = std::get<QuantizationSpec>(job.spec);
    q.alpha.assign(static_cast<std::size_t>(q.base), 0.0);
    q.alpha[1] = job.alpha1;
    q.alpha_seed.reset();
    const RunSpec swept = q;
    const SpectrumData sp = ctx.spectrum(swept, false);
    const double g = mean_gap_ratio(spacings(sp, true));
    const SlopeFit fit = fit_spectrum(sp, q.base, ctx.slope_params());
    r.rows.push_back({num(job.spec_index), group_label(job.spec), num(q.n), num(job.alpha1), num(g), num(fit.slope),
                      num(fit.scaled_residual), fit.is_outlier ? "1" : "0"});
    return r;
}

struct ExperimentTable {
    const char* file;
    std::vector<std::string> header;
    JobResult (*fn)(Context&, const Job&);
};

ExperimentTable table_for(Experiment e) {
    switch (e) {
    case Experiment::GapRatioScan:
        return {"gapratio-scan.csv", {"spec_id", "group", "N", "gap_ratio"}, gapratio_job};
    case Experiment::SpacingHist:
        return {"spacing-hist.csv", {"spec_id", "bin_center", "density"}, spacing_job};
    case Experiment::Sff:
        return {"sff.csv", {"spec_id", "t", "tau", "raw", "averaged"}, sff_job};
    case Experiment::SlopeScan:
        return {"slope-scan.csv", {"group", "N", "slope", "residual", "outlier", "smoothed"}, slope_job};
    case Experiment::Persistence:
        return {"persistence.csv", {"spec_id", "t", "z2", "z2_coe", "eta2"}, persistence_job};
    case Experiment::CommutatorScan:
        return {"commutator-scan.csv", {"spec_id", "omega1", "omega2", "defect"}, commutator_job};
    case Experiment::Husimi:
        return {"husimi.csv", {"spec_id", "eigen_index", "angle", "q", "p", "value"}, husimi_job};
    case Experiment::Interpolation:
        return {"interpolation.csv",
                {"spec_id", "kind", "N", "t_interp", "seed", "gap_ratio", "slope", "residual"},
                interpolation_job};
    case Experiment::OrbitCheck:
        return {"orbit-check.csv",
                {"spec_id", "t", "trace_po_real", "trace_po_imag", "trace_exact_real", "trace_exact_imag",
                 "rel_error"},
                orbit_job};
    case Experiment::PhaseSweep:
        return {"phase-sweep.csv",
                {"spec_id", "group", "N", "alpha1", "gap_ratio", "slope", "residual", "outlier"},
                sweep_job};
    }
    throw InvalidSpec("unknown experiment");
}

std::vector<Job> make_jobs(const ExperimentManifest& m) {
    std::vector<Job> jobs;
    if (m.experiment == Experiment::PhaseSweep) {
        const double from = param<double>(m.params, "alpha1_from", 0.0);
        const double to = param<double>(m.params, "alpha1_to", 0.998);
        const double step = param<double>(m.params, "alpha1_step", 0.002);
        if (!(step > 0.0) || to < from || from < 0.0 || to >= 1.0) {
            throw InvalidSpec("phase sweep needs 0 <= alpha1_from <= alpha1_to < 1 and a positive step");
        }
        const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < m.specs.size(); ++i) {
            const auto* q = std::get_if<QuantizationSpec>(&m.specs[i]);
            if (q == nullptr || q->base != 2) {
                throw InvalidSpec("phase sweep takes A = 2 quantization specs");
            }
            for (std::size_t k = 0; k < count; ++k) {
                jobs.push_back({i, m.specs[i], from + static_cast<double>(k) * step});
            }
        }
        return jobs;
    }
    for (std::size_t i = 0; i < m.specs.size(); ++i) {
        jobs.push_back({i, m.specs[i], 0.0});
    }
    return jobs;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<Row>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw PreconditionError("cannot write " + path.string());
    }
    io::CsvWriter csv(out, header);
    for (const Row& row : rows) {
        for (const std::string& c : row) {
            csv.cell(std::string_view(c));
        }
        csv.end_row();
    }
    if (!out) {
        throw PreconditionError("write failed for " + path.string());
    }
}

json spec_json(const RunSpec& spec) {
    return json{{"canonical", canonical(spec)}, {"group", group_label(spec)}, {"N", spec_dim(spec)}};
}

// Slope-scan post-processing: smoothing per group plus group verdicts.
std::vector<Row> slope_rows(const ExperimentManifest& m, const std::vector<Job>& jobs,
                            const std::vector<JobResult>& results, json& groups) {
    std::map<std::string, std::vector<std::pair<SlopeScanRow, std::size_t>>> by_group;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (results[k].error) {
            continue;
        }
        SlopeScanRow row;
        row.n = spec_dim(jobs[k].spec);
        row.fit.slope = results[k].summary["slope"];
        row.fit.scaled_residual = results[k].summary["residual"];
        row.fit.is_outlier = results[k].summary["outlier"];
        by_group[group_label(jobs[k].spec)].emplace_back(row, k);
    }
    const double radius = param<double>(m.params, "smoothing_radius", 10.0);
    std::vector<Row> rows;
    for (auto& [label, entries] : by_group) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.first.n < b.first.n; });
        std::vector<SlopeScanRow> plain;
        for (const auto& e : entries) {
            plain.push_back(e.first);
        }
        smooth_slopes(plain, radius);
        std::size_t outliers = 0;
        std::size_t four = 0;
        std::size_t two = 0;
        std::size_t smoothed = 0;
        for (const SlopeScanRow& row : plain) {
            rows.push_back({label, num(row.n), num(row.fit.slope), num(row.fit.scaled_residual),
                            row.fit.is_outlier ? "1" : "0", row.smoothed ? num(*row.smoothed) : ""});
            outliers += row.fit.is_outlier ? 1 : 0;
            if (!row.fit.is_outlier && row.smoothed) {
                ++smoothed;
                four += (*row.smoothed >= 3.0 && *row.smoothed <= 5.0) ? 1 : 0;
                two += (*row.smoothed >= 1.3 && *row.smoothed <= 2.7) ? 1 : 0;
            }
        }
        json g;
        g["count"] = plain.size();
        g["outlier_fraction"] = static_cast<double>(outliers) / static_cast<double>(plain.size());
        g["fraction_slope_four_band"] = smoothed ? static_cast<double>(four) / smoothed : 0.0;
        g["fraction_slope_two_band"] = smoothed ? static_cast<double>(two) / smoothed : 0.0;
        const auto* q = std::get_if<QuantizationSpec>(&jobs[entries.front().second].spec);
        if (q != nullptr) {
            g["predicted_slope"] = slope_class(q->family, q->base, q->alpha) == SlopeClass::Four ? 4 : 2;
        }
        groups[label] = g;
    }
    return rows;
}

json group_means(const std::vector<Job>& jobs, const std::vector<JobResult>& results, const char* key) {
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (!results[k].error && results[k].summary.contains(key)) {
            auto& a = acc[group_label(jobs[k].spec)];
            a.first += results[k].summary[key].get<double>();
            ++a.second;
        }
    }
    json out = json::object();
    for (const auto& [label, a] : acc) {
        out[label] = {{"mean", a.first / static_cast<double>(a.second)}, {"count", a.second}};
    }
    return out;
}

// Persistence: per group average on the tau grid of the first member.
json persistence_groups(const std::vector<Job>& jobs, const std::vector<JobResult>& results,
                        const ExperimentManifest& m) {
    std::map<std::string, std::vector<PersistenceSeries>> acc;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (results[k].error) {
            continue;
        }
        PersistenceSeries s;
        s.n = spec_dim(jobs[k].spec);
        s.z2 = results[k].summary["z2"].get<std::vector<double>>();
        for (std::size_t t = 0; t < s.z2.size(); ++t) {
            s.times.push_back(static_cast<int>(t));
            s.z2_coe_ref.push_back(z2_coe(static_cast<double>(t), s.n));
        }
        s.eta2 = param<double>(m.params, "cutoff", kDefaultCutoff) / static_cast<double>(s.n);
        acc[group_label(jobs[k].spec)].push_back(std::move(s));
    }
    json out = json::object();
    for (const auto& [label, members] : acc) {
        const PersistenceSeries avg = persistence_average(members);
        const auto nd = static_cast<double>(avg.n);
        double ratio = 0.0;
        int count = 0;
        for (std::size_t k = 0; k < avg.times.size(); ++k) {
            if (avg.times[k] >= 0.1 * nd && avg.times[k] <= 0.4 * nd) {
                ratio += avg.z2[k] / avg.z2_coe_ref[k];
                ++count;
            }
        }
        const ErgodicityVerdict v = cyc_ergodicity_check(avg, param<double>(m.params, "cutoff", kDefaultCutoff),
                                                         param<double>(m.params, "epsilon", kDefaultEpsilon),
                                                         param<double>(m.params, "slack", kDefaultSlack));
        out[label] = {{"count", members.size()},
                      {"mean_ratio_to_coe", count ? ratio / count : 0.0},
                      {"above_cutoff", v.above_cutoff},
                      {"matches_coe", v.matches_coe}};
    }
    return out;
}

} // namespace

std::string group_label(const RunSpec& spec) {
    std::string text = strip_field(canonical(spec), "N");
    if (std::holds_alternative<EnsembleSpec>(spec)) {
        text = strip_field(text, "seed");
    }
    return text;
}

RunSummary run(const ExperimentManifest& manifest, const RunOptions& options) {
    manifest.validate();
    const ExperimentTable table = table_for(manifest.experiment);
    const std::vector<Job> jobs = make_jobs(manifest);
    // parameter types are checked up front so a typo does not fail every job
    if (manifest.experiment == Experiment::SlopeScan || manifest.experiment == Experiment::Interpolation ||
        manifest.experiment == Experiment::PhaseSweep) {
        SpectrumCache probe;
        Context(manifest, probe).slope_params();
    }

    std::error_code ec;
    std::filesystem::create_directories(manifest.output_dir, ec);
    if (ec || !std::filesystem::is_directory(manifest.output_dir)) {
        throw PreconditionError("output path " + manifest.output_dir.string() + " is not writable");
    }

    std::optional<SpectrumCache> own;
    SpectrumCache* cache = options.cache;
    if (cache == nullptr) {
        own.emplace(manifest.cache_dir);
        cache = &*own;
    }
    const std::size_t hits0 = cache->hits();
    const std::size_t misses0 = cache->misses();

    Context ctx(manifest, *cache);
    std::vector<JobResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                validate_spec(jobs[k].spec);
                results[k] = table.fn(ctx, jobs[k]);
            } catch (const std::exception& ex) {
                results[k] = JobResult{};
                results[k].error = ex.what();
            }
            if (options.log != nullptr) {
                std::lock_guard<std::mutex> lock(log_mutex);
                *options.log << "[" << (k + 1) << "/" << jobs.size() << "] " << canonical(jobs[k].spec)
                             << (results[k].error ? " FAILED: " + *results[k].error : "") << '\n';
            }
        }
    };
    const int workers = std::max(1, std::min<int>(options.jobs.value_or(manifest.jobs), static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread& t : pool) {
        t.join();
    }

    RunSummary out;
    out.jobs_run = jobs.size();
    json summary;
    summary["experiment"] = std::string(to_string(manifest.experiment));
    summary["seed"] = manifest.seed;
    summary["specs"] = json::array();
    std::vector<Row> rows;
    std::vector<Row> errors;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        json entry = spec_json(jobs[k].spec);
        if (results[k].error) {
            ++out.failures;
            errors.push_back({num(jobs[k].spec_index), canonical(jobs[k].spec), *results[k].error});
            entry["error"] = *results[k].error;
        } else {
            rows.insert(rows.end(), results[k].rows.begin(), results[k].rows.end());
            for (const auto& item : results[k].summary.items()) {
                if (item.key() != "z2") {
                    entry[item.key()] = item.value();
                }
            }
        }
        if (manifest.experiment == Experiment::PhaseSweep) {
            entry["alpha1"] = jobs[k].alpha1;
        }
        summary["specs"].push_back(entry);
    }
    switch (manifest.experiment) {
    case Experiment::SlopeScan: {
        json groups = json::object();
        rows = slope_rows(manifest, jobs, results, groups);
        summary["groups"] = groups;
        break;
    }
    case Experiment::GapRatioScan:
    case Experiment::Interpolation:
        summary["groups"] = group_means(jobs, results, "gap_ratio");
        break;
    case Experiment::Persistence:
        summary["groups"] = persistence_groups(jobs, results, manifest);
        break;
    default:
        break;
    }

    const std::filesystem::path data = manifest.output_dir / table.file;
    write_csv(data, table.header, rows);
    out.files.push_back(data);
    const std::filesystem::path err = manifest.output_dir / "errors.csv";
    write_csv(err, {"spec_id", "spec", "message"}, errors);
    out.files.push_back(err);

    out.cache_hits = cache->hits() - hits0;
    out.eigensolves = cache->misses() - misses0;
    summary["failures"] = out.failures;
    summary["cache_hits"] = out.cache_hits;
    summary["eigensolves"] = out.eigensolves;
    const std::filesystem::path sum = manifest.output_dir / "summary.json";
    {
        std::ofstream f(sum, std::ios::trunc);
        if (!f) {
            throw PreconditionError("cannot write " + sum.string());
        }
        f << summary.dump(2) << '\n';
    }
    out.files.push_back(sum);
    out.summary = std::move(summary);
    return out;
}

} // namespace baker
