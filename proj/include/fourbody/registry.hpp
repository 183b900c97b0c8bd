#ifndef FOURBODY_REGISTRY_HPP
#define FOURBODY_REGISTRY_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fourbody {

/** Ordered list of indeterminate names. Geometric variables and formal
 * parameters (d, gamma, omega, ...) share one registry; parameters are
 * flagged so that differentiation and degree grading can exclude them.
 * Registries are immutable and shared; two polynomials interoperate only
 * when they hold the same registry object. */
class Registry {
  public:
    Registry(std::vector<std::string> vars, std::vector<std::string> params = {}) {
        for (auto& v : vars) {
            names_.push_back(v);
            param_.push_back(false);
        }
        for (auto& p : params) {
            names_.push_back(p);
            param_.push_back(true);
        }
        if (names_.size() > 32) throw std::invalid_argument("registry limited to 32 entries");
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw std::invalid_argument("duplicate registry name: " + names_[i]);
    }

    int size() const { return (int)names_.size(); }
    const std::string& name(int i) const { return names_.at(i); }
    bool is_param(int i) const { return param_.at(i); }

    int index(const std::string& n) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return (int)i;
        throw std::invalid_argument("unknown registry name: " + n);
    }
    bool has(const std::string& n) const {
        for (auto& s : names_)
            if (s == n) return true;
        return false;
    }

    bool same_content(const Registry& o) const {
        return names_ == o.names_ && param_ == o.param_;
    }

  private:
    std::vector<std::string> names_;
    std::vector<bool> param_;
};

using RegistryPtr = std::shared_ptr<const Registry>;

inline RegistryPtr make_registry(std::vector<std::string> vars,
                                 std::vector<std::string> params = {}) {
    return std::make_shared<const Registry>(std::move(vars), std::move(params));
}

inline bool compatible(const RegistryPtr& a, const RegistryPtr& b) {
    return a == b || (a && b && a->same_content(*b));
}

/** Exponent vector with fixed inline capacity (32 entries, exponents < 256).
 * Doubles as the derivative multi-index of differential operators. */
struct ExpVec {
    std::uint8_t n = 0;
    std::array<std::uint8_t, 32> e{};

    explicit ExpVec(int nvars = 0) : n((std::uint8_t)nvars) {}

    static ExpVec unit(int nvars, int i, int k = 1) {
        ExpVec v(nvars);
        v.e[(std::size_t)i] = (std::uint8_t)k;
        return v;
    }

    int operator[](int i) const { return e[(std::size_t)i]; }
    void set(int i, int k) {
        if (k < 0 || k > 255) throw std::domain_error("exponent out of range");
        e[(std::size_t)i] = (std::uint8_t)k;
    }
    void bump(int i, int k = 1) { set(i, (*this)[i] + k); }

    int total() const {
        int t = 0;
        for (int i = 0; i < n; ++i) t += e[(std::size_t)i];
        return t;
    }
    /** Total degree counting only the positions enabled in mask. */
    int total_masked(const std::vector<bool>& mask) const {
        int t = 0;
        for (int i = 0; i < n; ++i)
            if (mask[(std::size_t)i]) t += e[(std::size_t)i];
        return t;
    }

    ExpVec plus(const ExpVec& o) const {
        ExpVec r(n);
        for (int i = 0; i < n; ++i) r.set(i, (*this)[i] + o[i]);
        return r;
    }
    bool divides(const ExpVec& o) const {  // *this | o, componentwise <=
        for (int i = 0; i < n; ++i)
            if ((*this)[i] > o[i]) return false;
        return true;
    }
    ExpVec minus(const ExpVec& o) const {
        ExpVec r(n);
        for (int i = 0; i < n; ++i) {
            int v = (*this)[i] - o[i];
            if (v < 0) throw std::domain_error("negative exponent");
            r.set(i, v);
        }
        return r;
    }

    friend bool operator==(const ExpVec& a, const ExpVec& b) {
        return a.n == b.n && a.e == b.e;
    }
    friend bool operator!=(const ExpVec& a, const ExpVec& b) { return !(a == b); }
};

/** Graded-lexicographic order: higher total degree first, ties broken by the
 * earlier registry entry having the larger exponent. */
inline bool graded_lex_greater(const ExpVec& a, const ExpVec& b) {
    int ta = a.total(), tb = b.total();
    if (ta != tb) return ta > tb;
    for (int i = 0; i < a.n; ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

struct GradedLexGreater {
    bool operator()(const ExpVec& a, const ExpVec& b) const { return graded_lex_greater(a, b); }
};

struct ExpVecHash {
    std::size_t operator()(const ExpVec& v) const {
        std::size_t h = 0xcbf29ce484222325ULL ^ v.n;
        for (int i = 0; i < v.n; ++i) h = (h ^ v.e[(std::size_t)i]) * 0x100000001b3ULL;
        return h;
    }
};

} // namespace fourbody

#endif
