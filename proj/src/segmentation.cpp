#include "torustat/segmentation.hpp"

#include <cmath>

namespace torustat {

void SegmentationConfig::validate() const {
    if (min_segment_length < 4) {
        throw std::invalid_argument("SegmentationConfig: min_segment_length must be >= 4");
    }
    if (!(alpha > 0.0) || alpha > 0.5) {
        throw std::invalid_argument("SegmentationConfig: alpha must lie in (0, 0.5]");
    }
    if (calibration_replicates < 100) {
        throw std::invalid_argument("SegmentationConfig: needs >= 100 calibration replicates");
    }
    if (method == Method::Cvmc && !cvmc_family) {
        throw std::invalid_argument("SegmentationConfig: CVMC requires a family");
    }
    if (cvmc_family && *cvmc_family == Family::KatoJones) {
        throw std::invalid_argument("SegmentationConfig: CVMC supports von Mises and wrapped Cauchy");
    }
}

CalibrationCache::CalibrationCache(std::size_t replicates, std::uint64_t seed, unsigned threads,
                                   std::filesystem::path dir)
    : replicates_(replicates), seed_(seed), threads_(threads), dir_(std::move(dir)) {}

const CalibrationSample& CalibrationCache::fetch(const std::string& key,
                                                 const std::function<CalibrationSample()>& make) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    if (!dir_.empty()) {
        const std::filesystem::path file = dir_ / key;
        if (std::filesystem::exists(file)) {
            return memo_.emplace(key, load_calibration(file)).first->second;
        }
        CalibrationSample fresh = make();
        std::filesystem::create_directories(dir_);
        save_calibration(fresh, file);
        return memo_.emplace(key, std::move(fresh)).first->second;
    }
    return memo_.emplace(key, make()).first->second;
}

const CalibrationSample& CalibrationCache::b_infinity(std::size_t grid_size) {
    const std::string key =
        calibration_cache_filename(CalibrationLaw::BInfinity, grid_size, replicates_, seed_);
    return fetch(key, [&] { return simulate_b_infinity(grid_size, replicates_, seed_, threads_); });
}

const CalibrationSample& CalibrationCache::sn_null(std::size_t n, Family family,
                                                   double concentration) {
    // Cutoffs of the mean-change statistic are invariant in the mean
    // direction, so the null is always simulated at mu = 0.
    char tag[64];
    std::snprintf(tag, sizeof(tag), "%s-c%.12g", family_name(family).c_str(), concentration);
    const std::string key =
        calibration_cache_filename(CalibrationLaw::SnNull, n, replicates_, seed_, tag);
    return fetch(key, [&] {
        return simulate_sn_null(n, family, 0.0, concentration, replicates_, seed_, threads_);
    });
}

namespace {

class Segmenter {
public:
    Segmenter(const AngleSeries& series, const SegmentationConfig& config, CalibrationCache& cache)
        : series_(series), config_(config), cache_(cache) {}

    std::unique_ptr<SegmentNode> run(std::size_t lo, std::size_t hi) {
        auto node = std::make_unique<SegmentNode>();
        node->lo = lo;
        node->hi = hi;
        const std::size_t len = hi - lo + 1;
        if (len < config_.min_segment_length || len < min_test_length) {
            node->status = NodeStatus::TooShort;
        } else {
            const AngleSeries sub = series_.slice(lo, hi);
            try {
                node->report = run_test(sub);
                node->status = NodeStatus::Tested;
                if (node->report->reject) {
                    node->split_at = lo - 1 + node->report->changepoint_index;
                    node->left = run(lo, node->split_at);
                    node->right = run(node->split_at + 1, hi);
                }
            } catch (const degenerate_sample_error&) {
                node->status = NodeStatus::Degenerate;
            } catch (const undefined_mean_error&) {
                node->status = NodeStatus::Degenerate;
            }
        }
        if (node->is_leaf()) {
            node->summary = summarize(series_.slice(lo, hi));
        }
        return node;
    }

private:
    TestReport run_test(const AngleSeries& sub) {
        switch (config_.method) {
        case Method::Sacc:
            return sacc_test(sub, config_.known_mean, config_.alpha,
                             cache_.b_infinity(sub.size()));
        case Method::Sagc:
            return sagc_test(sub, config_.alpha, cache_.b_infinity(sub.size()));
        case Method::Cvmc:
            if (!config_.cvmc_concentration) {
                throw degenerate_sample_error("no usable concentration estimate");
            }
            return cvmc_test(sub, *config_.cvmc_family, *config_.cvmc_concentration, config_.alpha,
                             cache_.sn_null(sub.size(), *config_.cvmc_family,
                                            *config_.cvmc_concentration));
        }
        throw std::logic_error("unknown method");
    }

    const AngleSeries& series_;
    const SegmentationConfig& config_;
    CalibrationCache& cache_;
};

void collect_preorder(const SegmentNode* node, std::vector<const SegmentNode*>& out) {
    if (node == nullptr) return;
    out.push_back(node);
    collect_preorder(node->left.get(), out);
    collect_preorder(node->right.get(), out);
}

void collect_leaves(const SegmentNode* node, std::vector<const SegmentNode*>& out) {
    if (node == nullptr) return;
    if (node->is_leaf()) {
        out.push_back(node);
        return;
    }
    collect_leaves(node->left.get(), out);
    collect_leaves(node->right.get(), out);
}

} // namespace

std::vector<const SegmentNode*> SegmentTree::preorder() const {
    std::vector<const SegmentNode*> out;
    collect_preorder(root.get(), out);
    return out;
}

std::vector<const SegmentNode*> SegmentTree::leaves() const {
    std::vector<const SegmentNode*> out;
    collect_leaves(root.get(), out);
    return out;
}

std::vector<std::size_t> SegmentTree::changepoints() const {
    std::vector<std::size_t> cps;
    for (const SegmentNode* node : preorder()) {
        if (!node->is_leaf()) cps.push_back(node->split_at);
    }
    std::sort(cps.begin(), cps.end());
    return cps;
}

SegmentTree binary_segment(const AngleSeries& series, const SegmentationConfig& config,
                           CalibrationCache* cache) {
    config.validate();

    SegmentTree tree;
    tree.n = series.size();
    tree.config = config;
    if (config.method == Method::Cvmc && !config.cvmc_concentration) {
        // Plug-in concentration, estimated once from the root series.  A
        // series this fails on (point mass, rbar ~ 1) is untestable anyway;
        // the root then becomes a degenerate leaf.
        const double rbar = mean_resultant_length(series);
        if (rbar < 1.0 - 1e-12) {
            tree.config.cvmc_concentration = *config.cvmc_family == Family::VonMises
                                                 ? vm_kappa_from_resultant(rbar)
                                                 : rbar;
            tree.concentration_plugged_in = true;
        }
    }

    std::optional<CalibrationCache> local;
    if (cache == nullptr) {
        local.emplace(config.calibration_replicates, config.calibration_seed, config.threads,
                      config.cache_dir);
        cache = &*local;
    }
    Segmenter seg(series, tree.config, *cache);
    tree.root = seg.run(1, series.size());
    return tree;
}

std::vector<SegmentRow> segment_report(const SegmentTree& tree) {
    std::vector<SegmentRow> rows;
    for (const SegmentNode* leaf : tree.leaves()) {
        SegmentRow row;
        row.lo = leaf->lo;
        row.hi = leaf->hi;
        if (leaf->summary) {
            if (leaf->summary->mean_direction) {
                row.mean_rad = *leaf->summary->mean_direction;
                row.mean_deg = rad_to_deg(*leaf->summary->mean_direction);
            }
            row.concentration =
                concentration_value(*leaf->summary, tree.config.concentration_measure);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace torustat
