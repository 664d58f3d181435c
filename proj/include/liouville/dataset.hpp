#pragma once

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "liouville/verify.hpp"

namespace liouville {

using json = nlohmann::ordered_json;

constexpr int kDatasetSchemaVersion = 1;

/// One exported (integrand, integral) pair; round-trips through JSONL
/// bit-exactly and re-verifies after reload.
struct DatasetRecord {
    std::size_t id = 0;
    std::uint64_t seed = 0;
    std::string generator = "liouville"; // "liouville" | "bwd"
    bool normal = true;
    std::string tower;
    std::string integrand_infix;
    TokenSeq integrand_prefix;
    std::string integral_infix;
    TokenSeq integral_prefix;
    std::size_t integrand_len = 0;
    std::size_t integral_len = 0;

    static DatasetRecord from_pair(const GeneratedPair& p, std::size_t id) {
        DatasetRecord r;
        r.id = id;
        r.seed = p.seed;
        r.generator = p.generator;
        r.normal = p.normal;
        r.tower = tower_to_text(p.tower);
        r.integrand_infix = to_infix(p.integrand);
        r.integrand_prefix = p.integrand_prefix;
        r.integral_infix = to_infix(p.integral);
        r.integral_prefix = p.integral_prefix;
        r.integrand_len = p.integrand_prefix.size();
        r.integral_len = p.integral_prefix.size();
        return r;
    }

    Expr integrand() const { return from_prefix(integrand_prefix); }
    Expr integral() const { return from_prefix(integral_prefix); }
    Tower tower_of() const { return parse_tower(tower); }

    json to_json() const {
        json j;
        j["id"] = id;
        j["seed"] = seed;
        j["generator"] = generator;
        j["normal"] = normal;
        j["tower"] = tower;
        j["integrand"] = integrand_infix;
        j["integrand_prefix"] = integrand_prefix;
        j["integral"] = integral_infix;
        j["integral_prefix"] = integral_prefix;
        j["integrand_len"] = integrand_len;
        j["integral_len"] = integral_len;
        return j;
    }

    static DatasetRecord from_json(const json& j) {
        DatasetRecord r;
        r.id = j.at("id").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.generator = j.at("generator").get<std::string>();
        r.normal = j.at("normal").get<bool>();
        r.tower = j.at("tower").get<std::string>();
        r.integrand_infix = j.at("integrand").get<std::string>();
        r.integrand_prefix = j.at("integrand_prefix").get<TokenSeq>();
        r.integral_infix = j.at("integral").get<std::string>();
        r.integral_prefix = j.at("integral_prefix").get<TokenSeq>();
        r.integrand_len = j.at("integrand_len").get<std::size_t>();
        r.integral_len = j.at("integral_len").get<std::size_t>();
        return r;
    }
};

inline json dataset_header(const std::string& generator, std::uint64_t seed,
                           std::size_t count) {
    json j;
    j["schema"] = "liouville-dataset";
    j["version"] = kDatasetSchemaVersion;
    j["generator"] = generator;
    j["seed"] = seed;
    j["count"] = count;
    return j;
}

// ---------------------------------------------------------------------------
// Generation runner

/// Generates `count` verified pairs and writes them as JSONL (header record
/// first). Workers derive independent RNG streams from (seed, index), so the
/// output is byte-identical for any jobs value. A verification failure aborts
/// with diagnostics.
inline void run_generation(const GeneratorConfig& cfg, std::size_t count,
                           std::uint64_t seed, std::ostream& out, int jobs = 1) {
    std::vector<DatasetRecord> records(count);
    std::vector<std::string> failures(count);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            std::uint64_t rs = record_seed(seed, i);
            try {
                GeneratedPair p = generate_pair(cfg, rs);
                CheckOutcome chk = check_pair(p);
                if (!chk.passed()) {
                    failures[i] = "record " + std::to_string(i) +
                                  " failed verification: " + chk.message +
                                  (chk.witness ? " witness=" + to_infix(*chk.witness)
                                               : "");
                    continue;
                }
                records[i] = DatasetRecord::from_pair(p, i);
            } catch (const std::exception& e) {
                failures[i] = "record " + std::to_string(i) + ": " + e.what();
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const std::string& f : failures)
        if (!f.empty()) throw error("generation aborted: " + f);

    out << dataset_header(cfg.normal ? "liouville" : "liouville-parfrac", seed, count)
               .dump()
        << "\n";
    for (const DatasetRecord& r : records) out << r.to_json().dump() << "\n";
}

/// BWD baseline datasets (same JSONL shape, generator tag "bwd").
inline void run_bwd_generation(const BwdConfig& cfg, std::size_t count,
                               std::uint64_t seed, std::ostream& out, int jobs = 1) {
    std::vector<DatasetRecord> records(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            GeneratedPair p = bwd_baseline(cfg, record_seed(seed, i));
            records[i] = DatasetRecord::from_pair(p, i);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    out << dataset_header("bwd", seed, count).dump() << "\n";
    for (const DatasetRecord& r : records) out << r.to_json().dump() << "\n";
}

inline std::vector<DatasetRecord> read_dataset(std::istream& in) {
    std::vector<DatasetRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.contains("schema")) continue; // header record
        records.push_back(DatasetRecord::from_json(j));
    }
    return records;
}

inline std::vector<DatasetRecord> read_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open dataset file: " + path);
    return read_dataset(in);
}

// ---------------------------------------------------------------------------
// Length analysis (integrand vs. integral token counts)

struct GeneratorLengthStats {
    std::vector<std::pair<std::size_t, std::size_t>> points; // (integrand, integral)
    double median_integrand = 0;
    double median_integral = 0;
    double balanced_fraction = 0; // ratio within [1/2, 2]
};

struct LengthStats {
    std::map<std::string, GeneratorLengthStats> per_generator;
};

inline double median_of(std::vector<std::size_t> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t mid = v.size() / 2;
    if (v.size() % 2) return static_cast<double>(v[mid]);
    return (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid])) / 2.0;
}

inline double balanced_fraction_of(
    const std::vector<std::pair<std::size_t, std::size_t>>& pts) {
    if (pts.empty()) return 0;
    std::size_t ok = 0;
    for (const auto& [a, b] : pts) {
        double r = static_cast<double>(a) / static_cast<double>(b);
        if (r >= 0.5 && r <= 2.0) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(pts.size());
}

inline LengthStats length_analysis(const std::vector<DatasetRecord>& records) {
    LengthStats stats;
    for (const DatasetRecord& r : records)
        stats.per_generator[r.generator].points.emplace_back(r.integrand_len,
                                                             r.integral_len);
    for (auto& [g, s] : stats.per_generator) {
        std::vector<std::size_t> a, b;
        for (const auto& [x, y] : s.points) {
            a.push_back(x);
            b.push_back(y);
        }
        s.median_integrand = median_of(std::move(a));
        s.median_integral = median_of(std::move(b));
        s.balanced_fraction = balanced_fraction_of(s.points);
    }
    return stats;
}

inline void write_length_csv(const LengthStats& stats, std::ostream& out) {
    out << "generator,integrand_len,integral_len\n";
    for (const auto& [g, s] : stats.per_generator)
        for (const auto& [a, b] : s.points) out << g << "," << a << "," << b << "\n";
}

// ---------------------------------------------------------------------------
// Similarity analysis (coefficient skeletons, hash-bucketed)

struct SimilarityReport {
    std::size_t records = 0;
    std::size_t similar_pairs = 0; // unordered pairs with equal skeletons
    std::vector<std::pair<std::size_t, std::size_t>> exemplars;
};

inline std::string skeleton_key(const Expr& e) {
    return join_tokens(to_prefix(coefficient_skeleton(e)));
}

inline SimilarityReport similarity_analysis(const std::vector<DatasetRecord>& records,
                                            std::size_t max_exemplars = 5) {
    SimilarityReport rep;
    rep.records = records.size();
    std::unordered_map<std::string, std::vector<std::size_t>> buckets;
    for (const DatasetRecord& r : records)
        buckets[skeleton_key(r.integrand())].push_back(r.id);
    for (auto& [key, ids] : buckets) {
        if (ids.size() < 2) continue;
        rep.similar_pairs += ids.size() * (ids.size() - 1) / 2;
        if (rep.exemplars.size() < max_exemplars)
            rep.exemplars.emplace_back(ids[0], ids[1]);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Normalization experiment (k forced to 0; all four output shapes per draft)

struct NormalizationRow {
    std::size_t id = 0;
    std::size_t integrand_norm = 0, integral_norm = 0;
    std::size_t integrand_pf = 0, integral_pf = 0;
};

struct NormalizationSummary {
    std::vector<NormalizationRow> rows;
    double median_integrand_norm = 0, median_integrand_pf = 0;
    double median_integral_norm = 0, median_integral_pf = 0;
    // balanced fractions of the four (integrand form, integral form) combos
    double balanced_norm_norm = 0, balanced_norm_pf = 0;
    double balanced_pf_norm = 0, balanced_pf_pf = 0;
};

inline NormalizationSummary normalization_experiment(GeneratorConfig cfg,
                                                     std::size_t count,
                                                     std::uint64_t seed) {
    cfg.k_zero_prob = 1.0; // k = 0: isolate the effect of normalisation
    cfg.k_max = 0;
    NormalizationSummary sum;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(record_seed(seed, i));
        DraftForms forms;
        bool ok = false;
        for (int attempt = 0; attempt <= cfg.retry_budget && !ok; ++attempt) {
            GeneratorDraft d = detail::sample_draft(cfg, rng);
            forms = draft_forms(d);
            ok = !canonical(forms.integrand_norm).is_constant(Rat(0));
        }
        if (!ok) throw generation_error("degenerate drafts exhausted the retry budget");
        NormalizationRow row;
        row.id = i;
        row.integrand_norm = to_prefix(forms.integrand_norm).size();
        row.integral_norm = to_prefix(forms.integral_norm).size();
        row.integrand_pf = to_prefix(forms.integrand_pf).size();
        row.integral_pf = to_prefix(forms.integral_pf).size();
        sum.rows.push_back(row);
    }
    std::vector<std::size_t> a, b, c, d;
    std::vector<std::pair<std::size_t, std::size_t>> nn, np, pn, pp;
    for (const NormalizationRow& r : sum.rows) {
        a.push_back(r.integrand_norm);
        b.push_back(r.integrand_pf);
        c.push_back(r.integral_norm);
        d.push_back(r.integral_pf);
        nn.emplace_back(r.integrand_norm, r.integral_norm);
        np.emplace_back(r.integrand_norm, r.integral_pf);
        pn.emplace_back(r.integrand_pf, r.integral_norm);
        pp.emplace_back(r.integrand_pf, r.integral_pf);
    }
    sum.median_integrand_norm = median_of(std::move(a));
    sum.median_integrand_pf = median_of(std::move(b));
    sum.median_integral_norm = median_of(std::move(c));
    sum.median_integral_pf = median_of(std::move(d));
    sum.balanced_norm_norm = balanced_fraction_of(nn);
    sum.balanced_norm_pf = balanced_fraction_of(np);
    sum.balanced_pf_norm = balanced_fraction_of(pn);
    sum.balanced_pf_pf = balanced_fraction_of(pp);
    return sum;
}

inline void write_normalization_csv(const NormalizationSummary& sum, std::ostream& out) {
    out << "id,integrand_norm,integral_norm,integrand_parfrac,integral_parfrac\n";
    for (const NormalizationRow& r : sum.rows)
        out << r.id << "," << r.integrand_norm << "," << r.integral_norm << ","
            << r.integrand_pf << "," << r.integral_pf << "\n";
}

} // namespace liouville
