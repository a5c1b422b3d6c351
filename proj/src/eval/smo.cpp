#include "bri/smo.hpp"

#include "bri/error.hpp"
#include "bri/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bri {

TrainingSet::TrainingSet(std::size_t dim, std::vector<double> rows, std::vector<int> targets)
    : dim_(dim), rows_(std::move(rows)), targets_(std::move(targets)) {
    if (dim_ == 0 || rows_.size() != dim_ * targets_.size()) {
        throw UsageError("training matrix shape does not match target count");
    }
    for (int y : targets_) {
        if (y != 1 && y != -1) throw UsageError("SVM targets must be +1 or -1");
    }
}

double linear_kernel(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
}

double dual_objective(const TrainingSet& data, std::span<const double> alpha) {
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        linear += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (alpha[j] == 0.0) continue;
            quadratic += alpha[i] * alpha[j] * data.target(i) * data.target(j) *
                         linear_kernel(data.row(i), data.row(j));
        }
    }
    return linear - 0.5 * quadratic;
}

double kkt_violation(const TrainingSet& data, std::span<const double> alpha, double bias, double c) {
    std::vector<double> w(data.dim(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t d = 0; d < data.dim(); ++d) w[d] += alpha[i] * data.target(i) * data.row(i)[d];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double margin = data.target(i) * (linear_kernel(w, data.row(i)) + bias);
        double v = 0.0;
        if (alpha[i] <= 0.0) {
            v = std::max(0.0, 1.0 - margin);
        } else if (alpha[i] >= c) {
            v = std::max(0.0, margin - 1.0);
        } else {
            v = std::abs(margin - 1.0);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double BinarySvm::decision(std::span<const double> x) const {
    return linear_kernel(weights, x) + bias;
}

namespace {

// Platt's formulation: u(x) = sum_j alpha_j y_j K(x_j, x) - b, E_i = u(x_i) - y_i.
class SmoSolver {
public:
    SmoSolver(const TrainingSet& data, const SmoConfig& cfg)
        : data_(data), cfg_(cfg), n_(data.size()), kernel_(n_ * n_), alpha_(n_, 0.0), errors_(n_),
          rng_(0x5eed) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i; j < n_; ++j) {
                kernel_[i * n_ + j] = kernel_[j * n_ + i] = linear_kernel(data_.row(i), data_.row(j));
            }
            errors_[i] = -static_cast<double>(data_.target(i));
        }
    }

    BinarySvm run() {
        BinarySvm out;
        bool examine_all = true;
        std::size_t changed = 0;
        out.converged = true;
        while (changed > 0 || examine_all) {
            if (out.passes >= cfg_.max_passes) {
                out.converged = false;
                break;
            }
            ++out.passes;
            changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (examine_all || non_bound(i)) changed += examine(i) ? 1 : 0;
            }
            if (examine_all) {
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }

        out.alpha = alpha_;
        out.weights.assign(data_.dim(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t d = 0; d < data_.dim(); ++d) {
                out.weights[d] += alpha_[i] * data_.target(i) * data_.row(i)[d];
            }
        }
        out.bias = -threshold_;
        out.steps = steps_;
        out.objective_trace = std::move(trace_);
        out.max_kkt_violation = kkt_violation(data_, alpha_, out.bias, cfg_.c);
        return out;
    }

private:
    double k(std::size_t i, std::size_t j) const { return kernel_[i * n_ + j]; }
    bool non_bound(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < cfg_.c; }

    double snap(double a) const {
        const double slack = 1e-12 * cfg_.c;
        if (a < slack) return 0.0;
        if (a > cfg_.c - slack) return cfg_.c;
        return a;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double c = cfg_.c;
        const double eps = cfg_.epsilon;
        const double alph1 = alpha_[i1];
        const double alph2 = alpha_[i2];
        const double y1 = data_.target(i1);
        const double y2 = data_.target(i2);
        const double e1 = errors_[i1];
        const double e2 = errors_[i2];
        const double s = y1 * y2;

        double lo = 0.0;
        double hi = 0.0;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c, c + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph1 + alph2 - c);
            hi = std::min(c, alph1 + alph2);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1);
        const double k12 = k(i1, i2);
        const double k22 = k(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2 = 0.0;
        if (eta > 0.0) {
            a2 = std::clamp(alph2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // objective is linear (or concave-up) along the constraint line:
            // compare its value at both ends
            const double f1 = y1 * (e1 + threshold_) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 + threshold_) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - lo);
            const double h1 = alph1 + s * (alph2 - hi);
            const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                s * lo * l1 * k12;
            const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                s * hi * h1 * k12;
            if (lobj < hobj - eps) {
                a2 = lo;
            } else if (lobj > hobj + eps) {
                a2 = hi;
            } else {
                a2 = alph2;
            }
        }
        a2 = snap(a2);
        if (std::abs(a2 - alph2) < eps * (a2 + alph2 + eps)) return false;

        double a1 = alph1 + s * (alph2 - a2);
        if (a1 < 0.0) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c) {
            a2 += s * (a1 - c);
            a1 = c;
        }
        a1 = snap(a1);
        a2 = snap(a2);

        const double d1 = y1 * (a1 - alph1);
        const double d2 = y2 * (a2 - alph2);
        const double b1 = e1 + d1 * k11 + d2 * k12 + threshold_;
        const double b2 = e2 + d1 * k12 + d2 * k22 + threshold_;
        double b_new = 0.0;
        if (a1 > 0.0 && a1 < c) {
            b_new = b1;
        } else if (a2 > 0.0 && a2 < c) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }
        const double db = b_new - threshold_;
        for (std::size_t i = 0; i < n_; ++i) errors_[i] += d1 * k(i1, i) + d2 * k(i2, i) - db;
        threshold_ = b_new;
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        ++steps_;
        if (cfg_.record_objective) trace_.push_back(dual_objective(data_, alpha_));
        return true;
    }

    bool examine(std::size_t i2) {
        const double y2 = data_.target(i2);
        const double alph2 = alpha_[i2];
        const double e2 = errors_[i2];
        const double r2 = e2 * y2;
        const double tol = cfg_.tolerance;
        if (!((r2 < -tol && alph2 < cfg_.c) || (r2 > tol && alph2 > 0.0))) return false;

        std::size_t free_count = 0;
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!non_bound(i)) continue;
            ++free_count;
            const double gap = std::abs(errors_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (free_count > 1 && take_step(best, i2)) return true;

        std::size_t start = rng_.below(n_);
        for (std::size_t off = 0; off < n_; ++off) {
            const std::size_t i1 = (start + off) % n_;
            if (non_bound(i1) && take_step(i1, i2)) return true;
        }
        start = rng_.below(n_);
        for (std::size_t off = 0; off < n_; ++off) {
            const std::size_t i1 = (start + off) % n_;
            if (take_step(i1, i2)) return true;
        }
        return false;
    }

    const TrainingSet& data_;
    SmoConfig cfg_;
    std::size_t n_;
    std::vector<double> kernel_;
    std::vector<double> alpha_;
    std::vector<double> errors_;
    double threshold_ = 0.0;
    std::size_t steps_ = 0;
    std::vector<double> trace_;
    Rng rng_;
};

} // namespace

BinarySvm train_smo(const TrainingSet& data, const SmoConfig& cfg) {
    if (data.size() < 2) throw DegenerateTrainingSet("SVM needs at least two training points");
    const auto targets = data.targets();
    if (std::all_of(targets.begin(), targets.end(), [&](int y) { return y == targets.front(); })) {
        throw DegenerateTrainingSet("SVM needs both classes in the training set");
    }
    if (!(cfg.c > 0.0)) throw UsageError("SVM complexity parameter must be positive");
    return SmoSolver(data, cfg).run();
}

SvmClassifier SvmClassifier::fit(std::span<const LabeledPoint> train, const SmoConfig& cfg) {
    std::set<Label> present;
    for (const LabeledPoint& p : train) present.insert(p.label);
    if (present.size() < 2) throw DegenerateTrainingSet("SVM needs at least two classes");

    SvmClassifier model;
    model.labels_.assign(present.begin(), present.end());
    Features hi{};
    for (std::size_t f = 0; f < 2; ++f) {
        model.lo_[f] = train.front().features[f];
        hi[f] = model.lo_[f];
    }
    for (const LabeledPoint& p : train) {
        for (std::size_t f = 0; f < 2; ++f) {
            model.lo_[f] = std::min(model.lo_[f], p.features[f]);
            hi[f] = std::max(hi[f], p.features[f]);
        }
    }
    for (std::size_t f = 0; f < 2; ++f) model.span_[f] = hi[f] - model.lo_[f];

    for (std::size_t a = 0; a < model.labels_.size(); ++a) {
        for (std::size_t b = a + 1; b < model.labels_.size(); ++b) {
            std::vector<double> rows;
            std::vector<int> targets;
            for (const LabeledPoint& p : train) {
                if (p.label != model.labels_[a] && p.label != model.labels_[b]) continue;
                const Features scaled = model.scale(p.features);
                rows.insert(rows.end(), scaled.begin(), scaled.end());
                targets.push_back(p.label == model.labels_[a] ? 1 : -1);
            }
            TrainingSet set(2, std::move(rows), std::move(targets));
            model.machines_.push_back({model.labels_[a], model.labels_[b], train_smo(set, cfg)});
        }
    }
    return model;
}

Features SvmClassifier::scale(const Features& x) const {
    Features out{};
    for (std::size_t f = 0; f < 2; ++f) out[f] = span_[f] > 0.0 ? (x[f] - lo_[f]) / span_[f] : 0.0;
    return out;
}

Label SvmClassifier::classify(const Features& x) const {
    const Features scaled = scale(x);
    std::vector<std::size_t> votes(3, 0);
    for (const Machine& m : machines_) {
        const Label winner = m.svm.predict(scaled) > 0 ? m.positive : m.negative;
        ++votes[static_cast<std::size_t>(winner)];
    }
    Label best = labels_.front();
    for (Label l : labels_) {
        if (votes[static_cast<std::size_t>(l)] > votes[static_cast<std::size_t>(best)]) best = l;
    }
    return best;
}

bool SvmClassifier::converged() const noexcept {
    return std::all_of(machines_.begin(), machines_.end(),
                       [](const Machine& m) { return m.svm.converged; });
}

} // namespace bri
