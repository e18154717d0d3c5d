#include "torustat/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "torustat/parallel.hpp"

namespace torustat {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double half_pi = 0.5 * std::numbers::pi;

// Calibration draws must not collide with the data streams, which use the
// raw seed.
constexpr std::uint64_t calib_seed_salt = 0x9e3779b97f4a7c15ull;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::vector<CutoffRow> build_t1() {
    struct Block {
        std::size_t n;
        // kappa rows in the order 0.5, 1, 1.5, 2, 4, 10, then the bridge row
        double rows[7][3];
    };
    static const Block blocks[] = {
        {50,
         {{2.8664, 3.5570, 5.1797},
          {2.8852, 3.4706, 4.9647},
          {2.9324, 3.4908, 5.1092},
          {2.9059, 3.5290, 4.9475},
          {2.9876, 3.6723, 5.2044},
          {3.0115, 3.6687, 5.1525},
          {2.8967, 3.5376, 5.0784}}},
        {100,
         {{2.9655, 3.6087, 5.0154},
          {2.9998, 3.6626, 5.1375},
          {2.9601, 3.5823, 5.0707},
          {3.0054, 3.6686, 5.1957},
          {3.1320, 3.8628, 5.4352},
          {3.0528, 3.7376, 5.1318},
          {2.9987, 3.6939, 5.2307}}},
        {200,
         {{3.0294, 3.6653, 5.1041},
          {3.0619, 3.7477, 5.3283},
          {3.0533, 3.7104, 5.0903},
          {3.1221, 3.8160, 5.5242},
          {3.1010, 3.8392, 5.1764},
          {3.1391, 3.8052, 5.3281},
          {3.0353, 3.6733, 5.2212}}},
        {500,
         {{3.1820, 3.8620, 5.3930},
          {3.1469, 3.9033, 5.7212},
          {3.2189, 3.8676, 5.4404},
          {3.1148, 3.8149, 5.5284},
          {3.0986, 3.8050, 5.3250},
          {3.1611, 3.8389, 5.4520},
          {3.2224, 3.9021, 5.7649}}},
        {1000,
         {{3.2093, 3.9429, 5.5770},
          {3.2860, 3.9551, 5.5877},
          {3.2012, 3.9068, 5.7190},
          {3.2164, 3.9404, 5.4612},
          {3.1152, 3.8271, 5.4818},
          {3.2164, 3.9404, 5.4612},
          {3.2173, 3.8994, 5.3781}}},
    };
    static const double kappas[] = {0.5, 1.0, 1.5, 2.0, 4.0, 10.0};

    std::vector<CutoffRow> rows;
    for (const Block& b : blocks) {
        for (int i = 0; i < 7; ++i) {
            CutoffRow r;
            r.n = b.n;
            if (i < 6) {
                r.kappa = kappas[i];
                r.label = "n=" + std::to_string(b.n) + " kappa=" + fmt(kappas[i]);
            } else {
                r.is_bridge = true;
                r.label = "n=" + std::to_string(b.n) + " bridge";
            }
            r.q90 = b.rows[i][0];
            r.q95 = b.rows[i][1];
            r.q99 = b.rows[i][2];
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<CutoffRow> build_t2() {
    static const double kappas[] = {0.5, 1.0, 1.5};
    static const double mus[] = {0.0, half_pi, pi};
    static const char* mu_names[] = {"0", "pi/2", "pi"};
    static const double q[3][3][3] = {
        {{8.5456, 10.0233, 13.8042}, {8.5492, 10.0849, 13.7622}, {8.5860, 10.0583, 13.5162}},
        {{8.8183, 10.2612, 13.0927}, {8.6837, 10.2731, 13.5921}, {8.8742, 10.2840, 13.8020}},
        {{8.9328, 10.5176, 13.9789}, {9.2186, 10.7631, 13.5326}, {9.0382, 10.5016, 14.3562}},
    };
    std::vector<CutoffRow> rows;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CutoffRow r;
            r.n = 500;
            r.kappa = kappas[i];
            r.mu = mus[j];
            r.label = "kappa=" + fmt(kappas[i]) + " mu=" + mu_names[j];
            r.q90 = q[i][j][0];
            r.q95 = q[i][j][1];
            r.q99 = q[i][j][2];
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<CutoffRow> build_t3() {
    static const std::size_t sizes[] = {50, 100, 200};
    static const double kappas[] = {0.5, 1.0, 1.5, 2.0, 4.0, 10.0};
    static const double q[3][6][3] = {
        {{6.5722, 7.8637, 10.2533},
         {7.5233, 8.9762, 12.0100},
         {7.6742, 9.1220, 12.2159},
         {7.4798, 8.9543, 12.5480},
         {7.2877, 8.8327, 12.3680},
         {7.0852, 8.6129, 11.9444}},
        {{7.4101, 8.8300, 12.5361},
         {8.0260, 9.5321, 12.8955},
         {8.2939, 9.7830, 12.9363},
         {8.1398, 9.6036, 13.2454},
         {7.7705, 9.2947, 13.0220},
         {7.7706, 9.4081, 13.0166}},
        {{8.0906, 9.5555, 12.9020},
         {8.3988, 9.9724, 13.3396},
         {8.4884, 10.0626, 13.0109},
         {8.5996, 10.0631, 13.1336},
         {8.3216, 9.7448, 13.3388},
         {8.2707, 9.8393, 13.0018}},
    };
    std::vector<CutoffRow> rows;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 6; ++j) {
            CutoffRow r;
            r.n = sizes[i];
            r.kappa = kappas[j];
            r.mu = 0.0;
            r.label = "n=" + std::to_string(sizes[i]) + " kappa=" + fmt(kappas[j]);
            r.q90 = q[i][j][0];
            r.q95 = q[i][j][1];
            r.q99 = q[i][j][2];
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<CutoffRow> build_t4() {
    static const double rhos[] = {0.3, 0.5, 0.8};
    static const double mus[] = {0.0, half_pi, pi};
    static const char* mu_names[] = {"0", "pi/2", "pi"};
    static const double q[3][3][3] = {
        {{8.5028, 9.9692, 12.5997}, {8.5091, 10.0022, 13.3221}, {8.6932, 10.0872, 13.2863}},
        {{8.5504, 10.0791, 13.5735}, {8.3479, 9.9118, 13.2359}, {8.4932, 10.1220, 13.9901}},
        {{5.9095, 8.4464, 13.0573}, {5.6248, 8.2641, 12.7238}, {5.7724, 8.1428, 12.9080}},
    };
    std::vector<CutoffRow> rows;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CutoffRow r;
            r.n = 500;
            r.rho = rhos[i];
            r.mu = mus[j];
            r.label = "rho=" + fmt(rhos[i]) + " mu=" + mu_names[j];
            r.q90 = q[i][j][0];
            r.q95 = q[i][j][1];
            r.q99 = q[i][j][2];
            rows.push_back(r);
        }
    }
    return rows;
}

} // namespace

const std::vector<CutoffRow>& cutoff_table_rows(CutoffTable table) {
    static const std::vector<CutoffRow> t1 = build_t1();
    static const std::vector<CutoffRow> t2 = build_t2();
    static const std::vector<CutoffRow> t3 = build_t3();
    static const std::vector<CutoffRow> t4 = build_t4();
    switch (table) {
    case CutoffTable::T1: return t1;
    case CutoffTable::T2: return t2;
    case CutoffTable::T3: return t3;
    case CutoffTable::T4: return t4;
    }
    return t1;
}

std::string cutoff_table_name(CutoffTable table) {
    switch (table) {
    case CutoffTable::T1: return "t1";
    case CutoffTable::T2: return "t2";
    case CutoffTable::T3: return "t3";
    case CutoffTable::T4: return "t4";
    }
    return "?";
}

CalibrationSample simulate_sacc_null(std::size_t n, double mu, double kappa,
                                     std::size_t replicates, std::uint64_t seed, unsigned threads) {
    const DistributionSpec spec = DistributionSpec::von_mises(mu, kappa);
    std::vector<double> out(replicates);
    for_each_replicate(replicates, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        const AngleSeries data = sample(spec, n, rng);
        out[r] = scaled_cusum(sacc_a_values(data, mu)).max_statistic;
    });
    std::sort(out.begin(), out.end());
    return CalibrationSample{CalibrationLaw::BInfinity, n, replicates, seed, 0,
                             "sacc-null " + spec.describe(), std::move(out)};
}

CalibrationSample simulate_sagc_null(std::size_t n, const DistributionSpec& spec,
                                     std::size_t replicates, std::uint64_t seed, unsigned threads) {
    std::vector<double> out(replicates);
    for_each_replicate(replicates, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        const AngleSeries data = sample(spec, n, rng);
        out[r] = scaled_cusum(sagc_d_values(data)).max_statistic;
    });
    std::sort(out.begin(), out.end());
    return CalibrationSample{CalibrationLaw::BInfinity, n, replicates, seed, 0,
                             "sagc-null " + spec.describe(), std::move(out)};
}

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    double best = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return best;
}

double quantile_std_error(const CalibrationSample& sample, double q) {
    const double m = static_cast<double>(sample.samples.size());
    const double delta = std::min(0.005, 0.5 * std::min(q, 1.0 - q));
    const double slope = (quantile(sample, q + delta) - quantile(sample, q - delta)) / (2.0 * delta);
    return std::sqrt(q * (1.0 - q) / m) * slope;
}

std::vector<PowerCell> run_power_study(const PowerStudySpec& spec) {
    if (spec.h1_grid.empty()) throw std::invalid_argument("run_power_study: empty H1 grid");
    if (spec.replicates == 0) throw std::invalid_argument("run_power_study: zero replicates");
    const std::size_t n = spec.n;
    const std::size_t k_star = spec.k_star == 0 ? n / 2 : spec.k_star;
    if (k_star < 1 || k_star >= n) throw std::invalid_argument("run_power_study: bad changepoint");

    // Cutoffs are calibrated once against the method's null law.
    CalibrationSample calib = [&] {
        if (spec.method == Method::Cvmc) {
            const Family fam = spec.h0.family();
            if (fam == Family::KatoJones) {
                throw std::invalid_argument("run_power_study: CVMC needs von Mises or wrapped Cauchy");
            }
            const double conc = fam == Family::VonMises ? spec.h0.as_von_mises().kappa
                                                        : spec.h0.as_wrapped_cauchy().rho;
            return simulate_sn_null(n, fam, spec.h0.location(), conc, spec.calibration_replicates,
                                    spec.seed ^ calib_seed_salt, spec.threads);
        }
        return simulate_b_infinity(n, spec.calibration_replicates, spec.seed ^ calib_seed_salt,
                                   spec.threads);
    }();
    std::vector<double> cutoffs;
    cutoffs.reserve(spec.alphas.size());
    for (double a : spec.alphas) cutoffs.push_back(mc_cutoff(calib, a));

    std::vector<PowerCell> cells;
    for (std::size_t g = 0; g < spec.h1_grid.size(); ++g) {
        const DistributionSpec& h1 = spec.h1_grid[g];
        std::vector<double> stats(spec.replicates,
                                  std::numeric_limits<double>::quiet_NaN());
        for_each_replicate(spec.replicates, spec.threads, [&](std::size_t j) {
            RngStream rng(spec.seed, g * spec.replicates + j);
            std::vector<double> values;
            values.reserve(n);
            for (std::size_t i = 0; i < k_star; ++i) values.push_back(sample_one(spec.h0, rng));
            for (std::size_t i = k_star; i < n; ++i) values.push_back(sample_one(h1, rng));
            const AngleSeries data(std::move(values));
            try {
                switch (spec.method) {
                case Method::Sacc:
                    stats[j] = scaled_cusum(sacc_a_values(
                                                data, spec.known_mean ? *spec.known_mean
                                                                      : circular_mean(data)))
                                   .max_statistic;
                    break;
                case Method::Sagc:
                    stats[j] = scaled_cusum(sagc_d_values(data)).max_statistic;
                    break;
                case Method::Cvmc: {
                    const Family fam = spec.h0.family();
                    const double conc = fam == Family::VonMises ? spec.h0.as_von_mises().kappa
                                                                : spec.h0.as_wrapped_cauchy().rho;
                    stats[j] = cvmc_statistic(data, fam, conc).sn;
                    break;
                }
                }
            } catch (const degenerate_sample_error&) {
            } catch (const undefined_mean_error&) {
            }
        });
        std::size_t errors = 0;
        for (double s : stats) {
            if (std::isnan(s)) ++errors;
        }
        const double denom = static_cast<double>(spec.replicates - errors);
        for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
            std::size_t rejections = 0;
            for (double s : stats) {
                if (!std::isnan(s) && s > cutoffs[a]) ++rejections;
            }
            PowerCell cell;
            cell.h1_label = h1.describe();
            cell.alpha = spec.alphas[a];
            cell.power = denom > 0.0 ? static_cast<double>(rejections) / denom : 0.0;
            cell.errors = errors;
            cells.push_back(cell);
        }
    }
    return cells;
}

namespace {

CalibrationSample simulate_row(const CutoffRow& row, CutoffTable table, std::size_t replicates,
                               std::uint64_t seed, unsigned threads) {
    if (table == CutoffTable::T1) {
        if (row.is_bridge) return simulate_b_infinity(row.n, replicates, seed, threads);
        return simulate_sacc_null(row.n, 0.0, *row.kappa, replicates, seed, threads);
    }
    if (table == CutoffTable::T4) {
        return simulate_sn_null(row.n, Family::WrappedCauchy, row.mu, *row.rho, replicates, seed,
                                threads);
    }
    return simulate_sn_null(row.n, Family::VonMises, row.mu, *row.kappa, replicates, seed, threads);
}

} // namespace

std::vector<CutoffComparison> reproduce_cutoff_row(CutoffTable table, std::size_t row_index,
                                                   std::size_t replicates, std::uint64_t seed,
                                                   unsigned threads) {
    const auto& rows = cutoff_table_rows(table);
    if (row_index >= rows.size()) {
        throw std::invalid_argument("reproduce_cutoff_row: row index out of range");
    }
    if (replicates < 2000) {
        throw std::invalid_argument("reproduce_cutoff_row: needs >= 2000 replicates");
    }
    const CutoffRow& row = rows[row_index];
    const CalibrationSample sim = simulate_row(row, table, replicates, seed, threads);

    const double levels[] = {0.90, 0.95, 0.99};
    const double refs[] = {row.q90, row.q95, row.q99};
    std::vector<CutoffComparison> out;
    for (int i = 0; i < 3; ++i) {
        CutoffComparison c;
        c.row_label = row.label;
        c.level = levels[i];
        c.reference = refs[i];
        c.reproduced = quantile(sim, levels[i]);
        c.abs_gap = std::abs(c.reproduced - c.reference);
        c.tolerance = 3.0 * quantile_std_error(sim, levels[i]);
        c.within = c.abs_gap <= c.tolerance;
        out.push_back(c);
    }
    return out;
}

std::vector<CutoffComparison> reproduce_cutoff_table(CutoffTable table, std::size_t replicates,
                                                     std::uint64_t seed, unsigned threads) {
    std::vector<CutoffComparison> out;
    const auto& rows = cutoff_table_rows(table);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto part = reproduce_cutoff_row(table, i, replicates, seed, threads);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::string power_study_csv(const std::vector<PowerCell>& cells) {
    std::ostringstream os;
    os << "h1,alpha,power,errors\n";
    os.precision(10);
    for (const PowerCell& c : cells) {
        os << '"' << c.h1_label << "\"," << c.alpha << ',' << c.power << ',' << c.errors << '\n';
    }
    return os.str();
}

std::string cutoff_comparison_csv(const std::vector<CutoffComparison>& rows) {
    std::ostringstream os;
    os << "row,level,reference,reproduced,abs_gap,tolerance,within\n";
    os.precision(10);
    for (const CutoffComparison& c : rows) {
        os << '"' << c.row_label << "\"," << c.level << ',' << c.reference << ',' << c.reproduced
           << ',' << c.abs_gap << ',' << c.tolerance << ',' << (c.within ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace torustat
