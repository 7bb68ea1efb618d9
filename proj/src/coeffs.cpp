#include "fls/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace fls {

namespace {

cplx ipow(cplx base, index_t e) {
    if (e < 0) return cplx(1.0, 0.0) / ipow(base, -e);
    cplx acc(1.0, 0.0);
    cplx b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

std::vector<std::pair<index_t, cplx>> normalize_entries(std::vector<std::pair<index_t, cplx>> raw) {
    std::map<index_t, cplx> merged;
    for (const auto& [n, v] : raw) merged[n] += v;
    std::vector<std::pair<index_t, cplx>> out;
    out.reserve(merged.size());
    for (const auto& [n, v] : merged)
        if (v != cplx(0.0, 0.0)) out.emplace_back(n, v);
    return out;
}

}  // namespace

Support Support::hull(const Support& a, const Support& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    Support s;
    s.lo_unbounded = a.lo_unbounded || b.lo_unbounded;
    s.hi_unbounded = a.hi_unbounded || b.hi_unbounded;
    if (!s.lo_unbounded) s.lo = std::min(a.lo, b.lo);
    if (!s.hi_unbounded) s.hi = std::max(a.hi, b.hi);
    return s;
}

Support Support::intersect(const Support& a, const Support& b) {
    if (a.is_empty() || b.is_empty()) return empty();
    Support s;
    s.lo_unbounded = a.lo_unbounded && b.lo_unbounded;
    s.hi_unbounded = a.hi_unbounded && b.hi_unbounded;
    if (!s.lo_unbounded) s.lo = a.lo_unbounded ? b.lo : (b.lo_unbounded ? a.lo : std::max(a.lo, b.lo));
    if (!s.hi_unbounded) s.hi = a.hi_unbounded ? b.hi : (b.hi_unbounded ? a.hi : std::min(a.hi, b.hi));
    if (s.bounded() && s.lo > s.hi) return empty();
    return s;
}

struct CoeffRule::Node {
    RuleKind kind = RuleKind::FiniteSupport;
    Support support = Support::empty();
    std::vector<std::pair<index_t, cplx>> entries;  // FiniteSupport, sorted, nonzero
    cplx c0{0.0, 0.0};
    cplx ratio{0.0, 0.0};
    std::function<cplx(index_t)> fn;  // Generator
    mutable std::mutex mu;
    mutable std::unordered_map<index_t, cplx> memo;

    cplx eval(index_t n) const {
        switch (kind) {
            case RuleKind::FiniteSupport: {
                auto it = std::lower_bound(entries.begin(), entries.end(), n,
                                           [](const auto& e, index_t key) { return e.first < key; });
                if (it != entries.end() && it->first == n) return it->second;
                return {0.0, 0.0};
            }
            case RuleKind::ConstantAll:
                return c0;
            case RuleKind::Arithmetic:
                return c0 + static_cast<double>(n) * ratio;
            case RuleKind::Geometric:
                return c0 * ipow(ratio, n);
            case RuleKind::RegularGeometric:
                return n >= 0 ? c0 * ipow(ratio, n) : cplx(0.0, 0.0);
            case RuleKind::PrincipalGeometric:
                return n <= -1 ? c0 * ipow(ratio, -n) : cplx(0.0, 0.0);
            case RuleKind::Generator: {
                {
                    std::lock_guard<std::mutex> lock(mu);
                    auto it = memo.find(n);
                    if (it != memo.end()) return it->second;
                }
                cplx v = fn(n);
                std::lock_guard<std::mutex> lock(mu);
                memo.emplace(n, v);
                return v;
            }
        }
        return {0.0, 0.0};
    }
};

CoeffRule::CoeffRule() : CoeffRule(finite({})) {}

CoeffRule::CoeffRule(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

CoeffRule CoeffRule::finite(std::vector<std::pair<index_t, cplx>> entries) {
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::FiniteSupport;
    node->entries = normalize_entries(std::move(entries));
    node->support = node->entries.empty()
                        ? Support::empty()
                        : Support::range(node->entries.front().first, node->entries.back().first);
    return CoeffRule(std::move(node));
}

CoeffRule CoeffRule::constant(cplx c) {
    if (c == cplx(0.0, 0.0)) return finite({});
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::ConstantAll;
    node->c0 = c;
    node->support = Support::all();
    return CoeffRule(std::move(node));
}

CoeffRule CoeffRule::arithmetic(cplx c0, cplx r) {
    if (r == cplx(0.0, 0.0)) return constant(c0);
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::Arithmetic;
    node->c0 = c0;
    node->ratio = r;
    node->support = Support::all();
    return CoeffRule(std::move(node));
}

CoeffRule CoeffRule::geometric(cplx c0, cplx q) {
    if (q == cplx(0.0, 0.0)) throw InvalidInput("geometric rule requires q != 0");
    if (c0 == cplx(0.0, 0.0)) return finite({});
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::Geometric;
    node->c0 = c0;
    node->ratio = q;
    node->support = Support::all();
    return CoeffRule(std::move(node));
}

CoeffRule CoeffRule::regular_geometric(cplx c0, cplx q) {
    if (q == cplx(0.0, 0.0)) throw InvalidInput("regular_geometric rule requires q != 0");
    if (c0 == cplx(0.0, 0.0)) return finite({});
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::RegularGeometric;
    node->c0 = c0;
    node->ratio = q;
    node->support = Support::from(0);
    return CoeffRule(std::move(node));
}

CoeffRule CoeffRule::principal_geometric(cplx c0, cplx q) {
    if (q == cplx(0.0, 0.0)) throw InvalidInput("principal_geometric rule requires q != 0");
    if (c0 == cplx(0.0, 0.0)) return finite({});
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::PrincipalGeometric;
    node->c0 = c0;
    node->ratio = q;
    node->support = Support::upto(-1);
    return CoeffRule(std::move(node));
}

CoeffRule CoeffRule::generator(std::function<cplx(index_t)> fn, Support hint) {
    auto node = std::make_shared<Node>();
    node->kind = RuleKind::Generator;
    node->fn = std::move(fn);
    node->support = hint;
    return CoeffRule(std::move(node));
}

cplx CoeffRule::operator()(index_t n) const { return node_->eval(n); }

RuleKind CoeffRule::kind() const { return node_->kind; }

Support CoeffRule::support() const { return node_->support; }

std::optional<std::vector<std::pair<index_t, cplx>>> CoeffRule::finite_entries() const {
    if (node_->kind == RuleKind::FiniteSupport) return node_->entries;
    if (node_->support.bounded()) {
        std::vector<std::pair<index_t, cplx>> out;
        for (index_t n = node_->support.lo; n <= node_->support.hi; ++n) {
            cplx v = node_->eval(n);
            if (v != cplx(0.0, 0.0)) out.emplace_back(n, v);
        }
        return out;
    }
    return std::nullopt;
}

cplx CoeffRule::param_c0() const { return node_->c0; }
cplx CoeffRule::param_ratio() const { return node_->ratio; }

CoeffRule CoeffRule::shifted(index_t k) const {
    if (k == 0) return *this;
    switch (node_->kind) {
        case RuleKind::FiniteSupport: {
            auto entries = node_->entries;
            for (auto& e : entries) e.first += k;
            return finite(std::move(entries));
        }
        case RuleKind::ConstantAll:
            return *this;
        case RuleKind::Arithmetic:
            return arithmetic(node_->c0 - static_cast<double>(k) * node_->ratio, node_->ratio);
        case RuleKind::Geometric:
            return geometric(node_->c0 * ipow(node_->ratio, -k), node_->ratio);
        default: {
            CoeffRule base = *this;
            Support s = node_->support;
            if (!s.lo_unbounded) s.lo += k;
            if (!s.hi_unbounded) s.hi += k;
            return generator([base, k](index_t n) { return base(n - k); }, s);
        }
    }
}

CoeffRule CoeffRule::reversed() const {
    switch (node_->kind) {
        case RuleKind::FiniteSupport: {
            std::vector<std::pair<index_t, cplx>> entries;
            entries.reserve(node_->entries.size());
            for (const auto& [n, v] : node_->entries) entries.emplace_back(-n, v);
            return finite(std::move(entries));
        }
        case RuleKind::ConstantAll:
            return *this;
        case RuleKind::Arithmetic:
            return arithmetic(node_->c0, -node_->ratio);
        case RuleKind::Geometric:
            return geometric(node_->c0, cplx(1.0, 0.0) / node_->ratio);
        default: {
            CoeffRule base = *this;
            Support in = node_->support;
            Support s;
            s.lo_unbounded = in.hi_unbounded;
            s.hi_unbounded = in.lo_unbounded;
            if (!s.lo_unbounded) s.lo = -in.hi;
            if (!s.hi_unbounded) s.hi = -in.lo;
            return generator([base](index_t n) { return base(-n); }, s);
        }
    }
}

CoeffRule CoeffRule::scaled(cplx c) const {
    if (c == cplx(0.0, 0.0)) return finite({});
    if (c == cplx(1.0, 0.0)) return *this;
    switch (node_->kind) {
        case RuleKind::FiniteSupport: {
            auto entries = node_->entries;
            for (auto& e : entries) e.second *= c;
            return finite(std::move(entries));
        }
        case RuleKind::ConstantAll:
            return constant(c * node_->c0);
        case RuleKind::Arithmetic:
            return arithmetic(c * node_->c0, c * node_->ratio);
        case RuleKind::Geometric:
            return geometric(c * node_->c0, node_->ratio);
        case RuleKind::RegularGeometric:
            return regular_geometric(c * node_->c0, node_->ratio);
        case RuleKind::PrincipalGeometric:
            return principal_geometric(c * node_->c0, node_->ratio);
        default: {
            CoeffRule base = *this;
            return generator([base, c](index_t n) { return c * base(n); }, node_->support);
        }
    }
}

CoeffRule CoeffRule::derived() const {
    switch (node_->kind) {
        case RuleKind::FiniteSupport: {
            std::vector<std::pair<index_t, cplx>> entries;
            for (const auto& [n, v] : node_->entries) {
                if (n == 0) continue;  // factor (n+1) vanishes at out-index -1
                entries.emplace_back(n - 1, static_cast<double>(n) * v);
            }
            return finite(std::move(entries));
        }
        case RuleKind::ConstantAll:
            // (n+1) c == c + n c
            return arithmetic(node_->c0, node_->c0);
        default: {
            CoeffRule base = *this;
            Support s = node_->support;
            if (!s.lo_unbounded) s.lo -= 1;
            if (!s.hi_unbounded) s.hi -= 1;
            return generator(
                [base](index_t n) { return static_cast<double>(n + 1) * base(n + 1); }, s);
        }
    }
}

CoeffRule CoeffRule::absolute() const {
    switch (node_->kind) {
        case RuleKind::FiniteSupport: {
            auto entries = node_->entries;
            for (auto& e : entries) e.second = cplx(std::abs(e.second), 0.0);
            return finite(std::move(entries));
        }
        case RuleKind::ConstantAll:
            return constant(cplx(std::abs(node_->c0), 0.0));
        case RuleKind::Geometric:
            return geometric(cplx(std::abs(node_->c0), 0.0), cplx(std::abs(node_->ratio), 0.0));
        case RuleKind::RegularGeometric:
            return regular_geometric(cplx(std::abs(node_->c0), 0.0),
                                     cplx(std::abs(node_->ratio), 0.0));
        case RuleKind::PrincipalGeometric:
            return principal_geometric(cplx(std::abs(node_->c0), 0.0),
                                       cplx(std::abs(node_->ratio), 0.0));
        default: {
            CoeffRule base = *this;
            return generator([base](index_t n) { return cplx(std::abs(base(n)), 0.0); },
                             node_->support);
        }
    }
}

CoeffRule CoeffRule::pointwise(const CoeffRule& other) const {
    if (node_->kind == RuleKind::FiniteSupport || other.node_->kind == RuleKind::FiniteSupport) {
        const CoeffRule& fin = node_->kind == RuleKind::FiniteSupport ? *this : other;
        const CoeffRule& gen = node_->kind == RuleKind::FiniteSupport ? other : *this;
        std::vector<std::pair<index_t, cplx>> entries;
        for (const auto& [n, v] : fin.node_->entries) entries.emplace_back(n, v * gen(n));
        return finite(std::move(entries));
    }
    if (node_->kind == RuleKind::ConstantAll) return other.scaled(node_->c0);
    if (other.node_->kind == RuleKind::ConstantAll) return scaled(other.node_->c0);
    CoeffRule a = *this, b = other;
    return generator([a, b](index_t n) { return a(n) * b(n); },
                     Support::intersect(node_->support, other.node_->support));
}

CoeffRule combine(const std::vector<std::pair<cplx, CoeffRule>>& terms) {
    if (terms.empty()) throw InvalidInput("combine: empty term list");
    if (terms.size() == 1) return terms[0].second.scaled(terms[0].first);
    bool all_finite = std::all_of(terms.begin(), terms.end(), [](const auto& t) {
        return t.second.kind() == RuleKind::FiniteSupport;
    });
    if (all_finite) {
        std::vector<std::pair<index_t, cplx>> entries;
        for (const auto& [c, rule] : terms) {
            auto part = *rule.finite_entries();
            for (const auto& [n, v] : part) entries.emplace_back(n, c * v);
        }
        return CoeffRule::finite(std::move(entries));
    }
    Support s = Support::empty();
    for (const auto& [c, rule] : terms) s = Support::hull(s, rule.support());
    auto copy = terms;
    return CoeffRule::generator(
        [copy](index_t n) {
            cplx acc(0.0, 0.0);
            for (const auto& [c, rule] : copy) acc += c * rule(n);
            return acc;
        },
        s);
}

CoeffRule formula_preset(const std::string& name) {
    if (name == "ones") return CoeffRule::regular_geometric({1.0, 0.0}, {1.0, 0.0});
    if (name == "inv_square") {
        return CoeffRule::generator(
            [](index_t n) {
                if (n == 0) return cplx(0.0, 0.0);
                double d = static_cast<double>(n);
                return cplx(1.0 / (d * d), 0.0);
            },
            Support::all());
    }
    if (name == "alt_inv_sqrt") {
        return CoeffRule::generator(
            [](index_t n) {
                if (n == 0) return cplx(0.0, 0.0);
                double sign = (n % 2 == 0) ? 1.0 : -1.0;
                return cplx(sign / std::sqrt(std::abs(static_cast<double>(n))), 0.0);
            },
            Support::all());
    }
    throw InvalidInput("unknown formula preset: " + name);
}

index_t equation_index(index_t n) { return n > 0 ? 2 * n : -2 * n + 1; }

index_t equation_index_inverse(index_t j) {
    if (j < 1) throw InvalidInput("equation_index_inverse requires j >= 1");
    return j % 2 == 0 ? j / 2 : (1 - j) / 2;
}

CoeffRule fold_to_onesided(const CoeffRule& rule) {
    Support in = rule.support();
    Support hint = Support::from(0);
    if (in.bounded()) {
        index_t hi = 1;
        if (!in.is_empty()) {
            hi = std::max<index_t>(hi, 2 * std::max<index_t>(in.hi, 0));
            hi = std::max<index_t>(hi, 1 - 2 * std::min<index_t>(in.lo, 0));
        }
        hint = Support::range(0, hi);
    }
    CoeffRule base = rule;
    return CoeffRule::generator(
        [base](index_t s) -> cplx {
            if (s < 0) return {0.0, 0.0};
            if (s <= 1) return base(0) * 0.5;
            if (s % 2 == 0) return base(s / 2);
            return base((1 - s) / 2);
        },
        hint);
}

// ---------------------------------------------------------------------------
// summation engine
// ---------------------------------------------------------------------------

namespace {

constexpr int kTailBuffer = 48;
constexpr double kAlternationCeiling = 0.1;

bool is_real(cplx z) { return std::abs(z.imag()) <= 1e-13 * (1.0 + std::abs(z.real())); }

// Polynomial extrapolation of (1/depth, value) samples to depth = infinity.
std::optional<std::pair<cplx, double>> neville_to_zero(
    const std::vector<std::pair<int, cplx>>& samples) {
    const size_t m = samples.size();
    if (m < 3) return std::nullopt;
    std::vector<double> x(m);
    std::vector<cplx> col(m);
    for (size_t i = 0; i < m; ++i) {
        x[i] = 1.0 / static_cast<double>(samples[i].first);
        col[i] = samples[i].second;
    }
    cplx prev = col[0];
    cplx curr = col[0];
    for (size_t k = 1; k < m; ++k) {
        for (size_t i = 0; i + k < m; ++i) {
            double denom = x[i + k] - x[i];
            if (denom == 0.0) return std::nullopt;
            col[i] = (x[i + k] * col[i] - x[i] * col[i + 1]) / denom;
        }
        prev = curr;
        curr = col[0];
    }
    return std::make_pair(curr, std::abs(curr - prev));
}

}  // namespace

OneSidedAccumulator::OneSidedAccumulator(const SumPolicy& policy) : pol_(policy) {
    pol_.validate();
    win_partials_.reserve(pol_.stability_window);
    win_terms_.reserve(pol_.stability_window);
    tail_partials_.reserve(kTailBuffer);
    tail_terms_.reserve(kTailBuffer);
}

bool OneSidedAccumulator::push(cplx term) {
    if (decided_) return true;
    ++count_;
    partial_ += term;

    auto slide = [](std::vector<cplx>& buf, size_t cap, cplx v) {
        if (buf.size() == cap) buf.erase(buf.begin());
        buf.push_back(v);
    };
    slide(win_partials_, static_cast<size_t>(pol_.stability_window), partial_);
    slide(win_terms_, static_cast<size_t>(pol_.stability_window), term);
    slide(tail_partials_, kTailBuffer, partial_);
    slide(tail_terms_, kTailBuffer, term);

    // geometric checkpoints max_terms, max_terms/2, max_terms/4, ...
    for (int d = pol_.max_terms; d >= 16; d /= 2) {
        if (count_ == d) {
            checkpoints_.emplace_back(count_, partial_);
            checkpoint_terms_.emplace_back(count_, term);
            break;
        }
    }

    if (std::abs(partial_) > pol_.divergence_bound) {
        outcome_ = SumOutcome::make_diverged("partial sums exceeded divergence bound", count_);
        decided_ = true;
        return true;
    }

    const int min_explore = std::min(pol_.max_terms, std::max(2 * pol_.stability_window, 32));
    if (count_ >= min_explore && win_partials_.size() == static_cast<size_t>(pol_.stability_window)) {
        double re_lo = win_partials_[0].real(), re_hi = re_lo;
        double im_lo = win_partials_[0].imag(), im_hi = im_lo;
        for (const cplx& p : win_partials_) {
            re_lo = std::min(re_lo, p.real());
            re_hi = std::max(re_hi, p.real());
            im_lo = std::min(im_lo, p.imag());
            im_hi = std::max(im_hi, p.imag());
        }
        double diam = std::hypot(re_hi - re_lo, im_hi - im_lo);
        if (diam <= pol_.tolerance) {
            outcome_ = SumOutcome::make_converged(partial_, count_, diam);
            decided_ = true;
            return true;
        }
    }
    return false;
}

void OneSidedAccumulator::try_accelerate() {
    // Alternating tail: van Wijngaarden averaging of the trailing partial sums.
    // Applies when the observed terms are real, strictly alternating in sign
    // and decreasing in magnitude (the Leibniz hypothesis, assumed to persist).
    if (tail_terms_.size() >= 24) {
        bool gate = true;
        for (const cplx& t : tail_terms_)
            if (!is_real(t) || t.real() == 0.0) { gate = false; break; }
        if (gate) {
            for (size_t i = 1; i < tail_terms_.size(); ++i) {
                if (tail_terms_[i].real() * tail_terms_[i - 1].real() >= 0.0 ||
                    std::abs(tail_terms_[i].real()) >
                        std::abs(tail_terms_[i - 1].real()) * (1.0 + 1e-9)) {
                    gate = false;
                    break;
                }
            }
        }
        if (gate && std::abs(tail_terms_.back().real()) > kAlternationCeiling) gate = false;
        if (gate && !checkpoint_terms_.empty()) {
            // require visible decay across the run, not just inside the buffer
            double first = std::abs(checkpoint_terms_.front().second);
            if (first > 0.0 && std::abs(tail_terms_.back().real()) > 0.25 * first) gate = false;
        }
        if (gate) {
            auto average_down = [](std::vector<cplx> xs) {
                while (xs.size() > 1) {
                    for (size_t i = 0; i + 1 < xs.size(); ++i) xs[i] = 0.5 * (xs[i] + xs[i + 1]);
                    xs.pop_back();
                }
                return xs[0];
            };
            cplx full = average_down(tail_partials_);
            std::vector<cplx> half(tail_partials_.end() - tail_partials_.size() / 2,
                                   tail_partials_.end());
            cplx half_est = average_down(std::move(half));
            double resid = std::abs(full - half_est);
            if (resid <= pol_.tolerance) {
                outcome_ = SumOutcome::make_converged(full, count_, resid,
                                                      "alternating-tail acceleration");
                decided_ = true;
                return;
            }
        }
    }

    // Monotone tail: Richardson extrapolation of the geometric checkpoints in
    // powers of 1/depth. Gated on same-signed, decaying real terms; the
    // trailing window must be same-signed too, or a checkpoint grid can alias
    // an oscillation
    if (checkpoints_.size() >= 4) {
        bool gate = true;
        double sign = 0.0;
        auto sign_check = [&](cplx t) {
            if (!is_real(t)) return false;
            if (t.real() != 0.0) {
                double s = t.real() > 0.0 ? 1.0 : -1.0;
                if (sign == 0.0) sign = s;
                else if (s != sign) return false;
            }
            return true;
        };
        for (const auto& [d, t] : checkpoint_terms_)
            if (!sign_check(t)) { gate = false; break; }
        if (gate)
            for (const cplx& t : win_terms_)
                if (!sign_check(t)) { gate = false; break; }
        if (gate) {
            for (size_t i = 1; i < checkpoint_terms_.size(); ++i) {
                if (std::abs(checkpoint_terms_[i].second) >
                    std::abs(checkpoint_terms_[i - 1].second) * (1.0 + 1e-9)) {
                    gate = false;
                    break;
                }
            }
        }
        if (gate) {
            auto sorted = checkpoints_;
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            auto ext = neville_to_zero(sorted);
            if (ext) {
                auto [value, resid] = *ext;
                // the extrapolated correction must be comparable to the
                // observed drift over the last octave
                double octave = std::abs(sorted.back().second - sorted[sorted.size() - 2].second);
                bool sane = std::abs(value - partial_) <= 100.0 * octave + pol_.tolerance;
                if (sane && resid <= pol_.tolerance) {
                    outcome_ = SumOutcome::make_converged(value, count_, resid,
                                                          "monotone-tail extrapolation");
                    decided_ = true;
                    return;
                }
            }
        }
    }
}

SumOutcome OneSidedAccumulator::finish() {
    if (decided_) return outcome_;
    if (count_ < pol_.max_terms) {
        // caller stopped early: the term stream genuinely ended, zero tail
        decided_ = true;
        outcome_ = SumOutcome::make_converged(partial_, count_, 0.0);
        return outcome_;
    }

    try_accelerate();
    if (decided_) return outcome_;

    // Hard divergence evidence: trailing terms still above tolerance while the
    // partial sums drift coherently.
    if (win_terms_.size() == static_cast<size_t>(pol_.stability_window)) {
        bool above = true;
        cplx drift(0.0, 0.0);
        double total = 0.0;
        for (const cplx& t : win_terms_) {
            if (std::abs(t) < pol_.tolerance) { above = false; break; }
            drift += t;
            total += std::abs(t);
        }
        if (above && total > 0.0 && std::abs(drift) >= 0.8 * total &&
            std::abs(drift) >= pol_.stability_window * pol_.tolerance) {
            decided_ = true;
            outcome_ = SumOutcome::make_diverged(
                "terms fail to decay below tolerance while partial sums drift monotonically",
                count_);
            return outcome_;
        }
    }

    decided_ = true;
    outcome_ = SumOutcome::make_inconclusive(count_,
                                             "no convergence or divergence evidence at max_terms");
    return outcome_;
}

SumOutcome sum_one_sided(const std::function<cplx(index_t)>& term, const SumPolicy& policy) {
    OneSidedAccumulator acc(policy);
    for (index_t i = 0; i < policy.max_terms; ++i)
        if (acc.push(term(i))) break;
    return acc.finish();
}

SumOutcome combine_one_sided(const SumOutcome& pos, const SumOutcome& neg) {
    int depth = std::max(pos.depth, neg.depth);
    if (pos.diverged() || neg.diverged()) {
        std::string why = pos.diverged() ? "regular side: " + pos.reason.value_or("diverged")
                                         : "principal side: " + neg.reason.value_or("diverged");
        return SumOutcome::make_diverged(why, depth);
    }
    if (pos.converged() && neg.converged()) {
        double resid = pos.residual.value_or(0.0) + neg.residual.value_or(0.0);
        SumOutcome out = SumOutcome::make_converged(*pos.value + *neg.value, depth, resid);
        if (pos.reason || neg.reason) out.reason = pos.reason ? pos.reason : neg.reason;
        return out;
    }
    return SumOutcome::make_inconclusive(depth, "one-sided partial sums did not stabilize");
}

SumOutcome bilateral_sum(const CoeffRule& rule, const SumPolicy& policy) {
    policy.validate();
    switch (rule.kind()) {
        case RuleKind::FiniteSupport: {
            auto entries = *rule.finite_entries();
            cplx total(0.0, 0.0);
            index_t depth = 0;
            for (const auto& [n, v] : entries) {
                total += v;
                depth = std::max<index_t>(depth, std::abs(n));
            }
            return SumOutcome::make_converged(total, static_cast<int>(depth), 0.0, "finite support");
        }
        case RuleKind::ConstantAll:
            return SumOutcome::make_diverged("terms do not tend to 0", 0);
        case RuleKind::Arithmetic:
            return SumOutcome::make_diverged("terms do not tend to 0", 0);
        case RuleKind::Geometric: {
            double aq = std::abs(rule.param_ratio());
            std::string why = aq < 1.0   ? "principal-side terms grow without bound"
                              : aq > 1.0 ? "regular-side terms grow without bound"
                                         : "terms do not tend to 0";
            return SumOutcome::make_diverged(why, 0);
        }
        case RuleKind::RegularGeometric: {
            cplx q = rule.param_ratio();
            if (std::abs(q) < 1.0) {
                cplx v = rule.param_c0() / (cplx(1.0, 0.0) - q);
                return SumOutcome::make_converged(v, 0, 0.0, "geometric closed form");
            }
            return SumOutcome::make_diverged("regular-side terms do not tend to 0", 0);
        }
        case RuleKind::PrincipalGeometric: {
            cplx q = rule.param_ratio();
            if (std::abs(q) < 1.0) {
                cplx v = rule.param_c0() * q / (cplx(1.0, 0.0) - q);
                return SumOutcome::make_converged(v, 0, 0.0, "geometric closed form");
            }
            return SumOutcome::make_diverged("principal-side terms do not tend to 0", 0);
        }
        case RuleKind::Generator: {
            SumOutcome pos = sum_one_sided([&rule](index_t i) { return rule(i); }, policy);
            SumOutcome neg = sum_one_sided([&rule](index_t i) { return rule(-1 - i); }, policy);
            return combine_one_sided(pos, neg);
        }
    }
    return SumOutcome::make_inconclusive(0);
}

LimitEstimate estimate_limit(std::vector<std::pair<int, cplx>> samples, double tol,
                             double blowup_bound) {
    LimitEstimate est;
    est.samples = std::move(samples);
    for (const auto& [d, v] : est.samples) {
        if (std::abs(v) > blowup_bound) {
            est.state = LimitState::Blowup;
            return est;
        }
    }
    if (est.samples.size() < 3) {
        est.state = LimitState::NotStabilized;
        return est;
    }
    const size_t m = est.samples.size();
    cplx a = est.samples[m - 3].second, b = est.samples[m - 2].second,
         c = est.samples[m - 1].second;
    double scale = std::max(1.0, std::abs(c));
    if (std::abs(a - c) <= tol * scale && std::abs(b - c) <= tol * scale &&
        std::abs(a - b) <= tol * scale) {
        est.state = LimitState::Stabilized;
        est.value = c;
    }
    return est;
}

}  // namespace fls
