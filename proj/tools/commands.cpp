#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "cspr/errors.hpp"
#include "cspr/experiment.hpp"
#include "cspr/testkit.hpp"

namespace cspr::cli {

using json = nlohmann::ordered_json;

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
    if (max_m < 1) throw DomainError("--max-m must be >= 1");
    if (!(threshold_frac > 0.0)) throw DomainError("--threshold-frac must be > 0");
    if (workers < 0) throw DomainError("--workers must be >= 0");
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

struct Row {
    std::string id;
    std::optional<TestReport> report;
    std::string error;
    bool reject_holm = false;
};

struct FileLoad {
    std::vector<Sequence> records;
    std::string error;
};

FileLoad load_file(const std::string& path, const IngestionPolicy& policy) {
    FileLoad load;
    std::ifstream in(path);
    if (!in) {
        load.error = "cannot open file";
        return load;
    }
    try {
        load.records = parse_fasta(in, policy);
        if (load.records.empty()) load.error = "no records";
    } catch (const std::exception& e) {
        load.error = e.what();
        load.records.clear();
    }
    return load;
}

}  // namespace

SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) throw DomainError("summary of an empty collection");
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double p) {
        const double h = (static_cast<double>(values.size()) - 1.0) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    SummaryStats s;
    s.first_quartile = quantile(0.25);
    s.median = quantile(0.5);
    s.third_quartile = quantile(0.75);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_deviation = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

int cmd_test(const std::vector<std::string>& inputs, const RunConfig& config, std::ostream& out, std::ostream& err) {
    config.validate();
    if (config.linear) {
        err << "warning: --linear drops the wrap-around window; the covariance estimator assumes circular "
               "sequences\n";
    }
    IngestionPolicy policy;
    policy.ambiguity = config.ambiguity;
    policy.default_topology = config.linear ? Topology::linear : Topology::circular;

    // Rows are laid out in input order; each file contributes either its records or one error row.
    std::vector<Row> rows;
    std::vector<Sequence> sequences;
    std::vector<std::size_t> row_of_sequence;
    std::size_t failed_files = 0;
    for (const auto& path : inputs) {
        auto load = load_file(path, policy);
        if (!load.error.empty()) {
            ++failed_files;
            rows.push_back({path, std::nullopt, load.error, false});
            err << "error: " << path << ": " << load.error << '\n';
            continue;
        }
        for (auto& s : load.records) {
            rows.push_back({s.id(), std::nullopt, {}, false});
            row_of_sequence.push_back(rows.size() - 1);
            sequences.push_back(std::move(s));
        }
    }

    TestConfig tc;
    tc.alpha = config.alpha;
    tc.max_m = config.max_m;
    tc.threshold_frac = config.threshold_frac;
    auto results = run_batch(sequences, tc, config.workers);
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& row = rows[row_of_sequence[i]];
        row.report = std::move(results[i].report);
        row.error = std::move(results[i].error);
    }

    std::vector<std::optional<double>> p;
    for (const auto& row : rows) p.push_back(row.report ? row.report->p_value : std::nullopt);
    const auto holm = holm_bonferroni(std::span<const std::optional<double>>(p), config.alpha);

    std::size_t accepted = 0, rejected = 0, singular = 0, errors = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].reject_holm = holm[i];
        if (!rows[i].report) ++errors;
        else if (rows[i].report->status == TestStatus::singular_covariance) ++singular;
        else if (holm[i]) ++rejected;
        else ++accepted;
    }

    const auto status_of = [](const Row& row) {
        return row.report ? std::string(to_string(row.report->status)) : "error: " + row.error;
    };

    if (config.format == OutputFormat::tsv) {
        out << "id\tn\tgc\tskipped\tm_used\tcapped\teta\tp_value\tstatus\treject_raw\treject_holm\n";
        for (const auto& row : rows) {
            out << row.id << '\t';
            if (const auto& r = row.report) {
                out << r->n << '\t' << fmt(r->gc) << '\t' << r->skipped_positions << '\t' << r->m_used << '\t'
                    << flag(r->truncated_at_cap) << '\t' << (r->eta ? fmt(*r->eta) : "NA") << '\t'
                    << (r->p_value ? fmt(*r->p_value) : "NA") << '\t' << status_of(row) << '\t'
                    << flag(r->rejects_at(config.alpha)) << '\t' << flag(row.reject_holm) << '\n';
            } else {
                out << "NA\tNA\tNA\tNA\tNA\tNA\tNA\t" << status_of(row) << "\tfalse\tfalse\n";
            }
        }
        out << "# summary\trecords=" << rows.size() << "\taccepted=" << accepted << "\trejected=" << rejected
            << "\tsingular=" << singular << "\terrors=" << errors << "\talpha=" << fmt(config.alpha)
            << "\tcorrection=holm-bonferroni\n";
    } else {
        json doc;
        doc["reports"] = json::array();
        for (const auto& row : rows) {
            json j;
            j["id"] = row.id;
            if (const auto& r = row.report) {
                j["n"] = r->n;
                j["gc"] = r->gc;
                j["skipped"] = r->skipped_positions;
                j["m_used"] = r->m_used;
                j["capped"] = r->truncated_at_cap;
                j["eta"] = r->eta ? json(*r->eta) : json(nullptr);
                j["p_value"] = r->p_value ? json(*r->p_value) : json(nullptr);
                j["status"] = status_of(row);
                j["reject_raw"] = r->rejects_at(config.alpha);
            } else {
                for (const char* key : {"n", "gc", "skipped", "m_used", "capped", "eta", "p_value"}) j[key] = nullptr;
                j["status"] = status_of(row);
                j["reject_raw"] = false;
            }
            j["reject_holm"] = row.reject_holm;
            doc["reports"].push_back(std::move(j));
        }
        doc["summary"] = {{"records", rows.size()},   {"accepted", accepted}, {"rejected", rejected},
                          {"singular", singular},     {"errors", errors},     {"alpha", config.alpha},
                          {"correction", "holm-bonferroni"}};
        out << doc.dump(2) << '\n';
    }
    return !inputs.empty() && failed_files == inputs.size() ? 1 : 0;
}

int cmd_summary(const std::vector<std::string>& inputs, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
    IngestionPolicy policy;
    policy.ambiguity = config.ambiguity;
    std::vector<double> lengths;
    std::vector<double> gcs;
    for (const auto& path : inputs) {
        auto load = load_file(path, policy);
        if (!load.error.empty()) {
            err << "error: " << path << ": " << load.error << '\n';
            continue;
        }
        for (const auto& s : load.records) {
            lengths.push_back(static_cast<double>(s.size()));
            if (!s.empty()) gcs.push_back(gc_content(s));
        }
    }
    if (lengths.empty()) {
        err << "error: no records in any input\n";
        return 1;
    }
    const auto length = summarize(lengths);
    const auto gc = gcs.empty() ? SummaryStats{} : summarize(gcs);

    if (config.format == OutputFormat::tsv) {
        out << "# records\t" << lengths.size() << '\n';
        out << "property\tfirst_quartile\tmedian\tthird_quartile\tmean\tstd_deviation\n";
        for (const auto& [name, s] : {std::pair{"length", length}, std::pair{"gc_content", gc}}) {
            out << name << '\t' << fmt(s.first_quartile) << '\t' << fmt(s.median) << '\t' << fmt(s.third_quartile)
                << '\t' << fmt(s.mean) << '\t' << fmt(s.std_deviation) << '\n';
        }
    } else {
        json doc;
        doc["records"] = lengths.size();
        for (const auto& [name, s] : {std::pair{"length", length}, std::pair{"gc_content", gc}}) {
            doc[name] = {{"first_quartile", s.first_quartile}, {"median", s.median},
                         {"third_quartile", s.third_quartile}, {"mean", s.mean},
                         {"std_deviation", s.std_deviation}};
        }
        out << doc.dump(2) << '\n';
    }
    return 0;
}

namespace {

ExperimentSpec load_spec(const std::string& path, std::optional<std::uint64_t> seed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment config '" + path + "'");
    auto spec = parse_experiment(in);
    if (seed) spec.seed = *seed;
    return spec;
}

}  // namespace

int cmd_simulate(const std::string& spec_path, const std::string& out_path, std::optional<std::uint64_t> seed,
                 std::ostream& err) {
    const auto spec = load_spec(spec_path, seed);
    if (spec.effects.size() != 1) {
        throw ConfigError(spec.model == ModelKind::markov ? "epsilon" : "perturbation",
                          "simulate takes a single value, not a grid");
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    for (std::size_t r = 0; r < spec.replicates; ++r) write_fasta(out, simulate_replicate(spec, spec.effects[0], r));
    if (spec.replicates == 0) err << "warning: replicates = 0, wrote an empty file\n";
    return 0;
}

int cmd_power(const std::string& spec_path, const RunConfig& config, std::optional<std::uint64_t> seed,
              std::ostream& out, std::ostream& err) {
    auto spec = load_spec(spec_path, seed);
    if (config.alpha_given) spec.alpha = config.alpha;
    if (spec.replicates == 0) err << "warning: replicates = 0, the power table is empty\n";
    const auto rows = run_power(spec, config.workers);
    const char* effect = spec.model == ModelKind::markov ? "epsilon" : "perturbation";
    if (config.format == OutputFormat::tsv) {
        out << effect << "\tn\treplicates\trejections\tsingular\trate\tstd_error\n";
        for (const auto& r : rows) {
            out << fmt(r.effect) << '\t' << r.n << '\t' << r.replicates << '\t' << r.rejections << '\t' << r.singular
                << '\t' << fmt(r.rate) << '\t' << fmt(r.standard_error) << '\n';
        }
        out << "# alpha\t" << fmt(spec.alpha) << '\n';
    } else {
        json doc;
        doc["alpha"] = spec.alpha;
        doc["rows"] = json::array();
        for (const auto& r : rows) {
            doc["rows"].push_back({{effect, r.effect},          {"n", r.n},
                                   {"replicates", r.replicates}, {"rejections", r.rejections},
                                   {"singular", r.singular},     {"rate", r.rate},
                                   {"std_error", r.standard_error}});
        }
        out << doc.dump(2) << '\n';
    }
    return 0;
}

}  // namespace cspr::cli
