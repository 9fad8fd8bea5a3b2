#include "hifs/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#if defined(__x86_64__) || defined(__i386__)
#define HIFS_X86 1
#include <immintrin.h>
#else
#define HIFS_X86 0
#endif

namespace hifs::kernels {

PointSet::PointSet(std::span<const Complex> pts) {
    re.reserve(pts.size());
    im.reserve(pts.size());
    for (const Complex& z : pts) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
}

PointSet circle(double radius, std::size_t count) {
    PointSet ps;
    ps.re.resize(count);
    ps.im.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        ps.re[k] = radius * std::cos(t);
        ps.im[k] = radius * std::sin(t);
    }
    return ps;
}

namespace {

void check_sizes(const PointSet& a, std::size_t n) {
    if (a.re.size() != n || a.im.size() != n) {
        throw std::invalid_argument("kernel operands have mismatched lengths");
    }
}

// One lane of the Möbius map, written in the exact operation order the
// vector version uses.
inline void mobius_lane(const Matrix2& m, double x, double y, double& ox, double& oy) {
    const double nr = (m[0].real() * x - m[0].imag() * y) + m[1].real();
    const double ni = (m[0].real() * y + m[0].imag() * x) + m[1].imag();
    const double dr = (m[2].real() * x - m[2].imag() * y) + m[3].real();
    const double di = (m[2].real() * y + m[2].imag() * x) + m[3].imag();
    const double dd = dr * dr + di * di;
    ox = (nr * dr + ni * di) / dd;
    oy = (ni * dr - nr * di) / dd;
}

inline double pseudo_lane(double x1, double y1, double x2, double y2) {
    const double dx = x1 - x2;
    const double dy = y1 - y2;
    const double num = std::sqrt(dx * dx + dy * dy);
    const double pr = 1.0 - (x1 * x2 + y1 * y2);
    const double pi = -(y1 * x2 - x1 * y2);
    const double den = std::sqrt(pr * pr + pi * pi);
    return num / den;
}

}  // namespace

namespace scalar {

void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out) {
    const std::size_t n = in.size();
    check_sizes(in, n);
    out.re.resize(n);
    out.im.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        mobius_lane(m, in.re[i], in.im[i], out.re[i], out.im[i]);
    }
}

double max_deviation(const Matrix2& m, const PointSet& in) {
    const std::size_t n = in.size();
    check_sizes(in, n);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ox;
        double oy;
        mobius_lane(m, in.re[i], in.im[i], ox, oy);
        const double dx = ox - in.re[i];
        const double dy = oy - in.im[i];
        const double d = std::sqrt(dx * dx + dy * dy);
        best = d > best ? d : best;
    }
    return best;
}

void pseudo_distance(const PointSet& z, const PointSet& w, std::span<double> out) {
    const std::size_t n = z.size();
    check_sizes(z, n);
    check_sizes(w, n);
    if (out.size() != n) {
        throw std::invalid_argument("kernel output has wrong length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = pseudo_lane(z.re[i], z.im[i], w.re[i], w.im[i]);
    }
}

}  // namespace scalar

#if HIFS_X86

namespace {

struct MobiusLanes {
    __m256d ar, ai, br, bi, cr, ci, dr, di;
};

__attribute__((target("avx2"))) inline MobiusLanes broadcast(const Matrix2& m) {
    return {_mm256_set1_pd(m[0].real()), _mm256_set1_pd(m[0].imag()),
            _mm256_set1_pd(m[1].real()), _mm256_set1_pd(m[1].imag()),
            _mm256_set1_pd(m[2].real()), _mm256_set1_pd(m[2].imag()),
            _mm256_set1_pd(m[3].real()), _mm256_set1_pd(m[3].imag())};
}

__attribute__((target("avx2"))) inline void mobius4(const MobiusLanes& m, __m256d x, __m256d y,
                                                    __m256d& ox, __m256d& oy) {
    const __m256d nr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(m.ar, x), _mm256_mul_pd(m.ai, y)), m.br);
    const __m256d ni = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(m.ar, y), _mm256_mul_pd(m.ai, x)), m.bi);
    const __m256d dr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(m.cr, x), _mm256_mul_pd(m.ci, y)), m.dr);
    const __m256d di = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(m.cr, y), _mm256_mul_pd(m.ci, x)), m.di);
    const __m256d dd = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
    ox = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(nr, dr), _mm256_mul_pd(ni, di)), dd);
    oy = _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(ni, dr), _mm256_mul_pd(nr, di)), dd);
}

}  // namespace

namespace avx2 {

__attribute__((target("avx2"))) void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out) {
    const std::size_t n = in.size();
    check_sizes(in, n);
    out.re.resize(n);
    out.im.resize(n);
    const MobiusLanes lanes = broadcast(m);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ox;
        __m256d oy;
        mobius4(lanes, _mm256_loadu_pd(&in.re[i]), _mm256_loadu_pd(&in.im[i]), ox, oy);
        _mm256_storeu_pd(&out.re[i], ox);
        _mm256_storeu_pd(&out.im[i], oy);
    }
    for (; i < n; ++i) {
        mobius_lane(m, in.re[i], in.im[i], out.re[i], out.im[i]);
    }
}

__attribute__((target("avx2"))) double max_deviation(const Matrix2& m, const PointSet& in) {
    const std::size_t n = in.size();
    check_sizes(in, n);
    const MobiusLanes lanes = broadcast(m);
    __m256d best4 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(&in.re[i]);
        const __m256d y = _mm256_loadu_pd(&in.im[i]);
        __m256d ox;
        __m256d oy;
        mobius4(lanes, x, y, ox, oy);
        const __m256d dx = _mm256_sub_pd(ox, x);
        const __m256d dy = _mm256_sub_pd(oy, y);
        const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        best4 = _mm256_max_pd(best4, d);
    }
    alignas(32) double lanes_out[4];
    _mm256_store_pd(lanes_out, best4);
    double best = 0.0;
    for (double v : lanes_out) {
        best = v > best ? v : best;
    }
    for (; i < n; ++i) {
        double ox;
        double oy;
        mobius_lane(m, in.re[i], in.im[i], ox, oy);
        const double dx = ox - in.re[i];
        const double dy = oy - in.im[i];
        const double d = std::sqrt(dx * dx + dy * dy);
        best = d > best ? d : best;
    }
    return best;
}

__attribute__((target("avx2"))) void pseudo_distance(const PointSet& z, const PointSet& w,
                                                     std::span<double> out) {
    const std::size_t n = z.size();
    check_sizes(z, n);
    check_sizes(w, n);
    if (out.size() != n) {
        throw std::invalid_argument("kernel output has wrong length");
    }
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x1 = _mm256_loadu_pd(&z.re[i]);
        const __m256d y1 = _mm256_loadu_pd(&z.im[i]);
        const __m256d x2 = _mm256_loadu_pd(&w.re[i]);
        const __m256d y2 = _mm256_loadu_pd(&w.im[i]);
        const __m256d dx = _mm256_sub_pd(x1, x2);
        const __m256d dy = _mm256_sub_pd(y1, y2);
        const __m256d num = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        const __m256d pr = _mm256_sub_pd(one, _mm256_add_pd(_mm256_mul_pd(x1, x2), _mm256_mul_pd(y1, y2)));
        const __m256d pi = _mm256_sub_pd(zero, _mm256_sub_pd(_mm256_mul_pd(y1, x2), _mm256_mul_pd(x1, y2)));
        const __m256d den = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(pr, pr), _mm256_mul_pd(pi, pi)));
        _mm256_storeu_pd(&out[i], _mm256_div_pd(num, den));
    }
    for (; i < n; ++i) {
        out[i] = pseudo_lane(z.re[i], z.im[i], w.re[i], w.im[i]);
    }
}

}  // namespace avx2

bool avx2_supported() {
    return __builtin_cpu_supports("avx2");
}

#else

namespace avx2 {
void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out) { scalar::mobius_apply(m, in, out); }
double max_deviation(const Matrix2& m, const PointSet& in) { return scalar::max_deviation(m, in); }
void pseudo_distance(const PointSet& z, const PointSet& w, std::span<double> out) {
    scalar::pseudo_distance(z, w, out);
}
}  // namespace avx2

bool avx2_supported() {
    return false;
}

#endif

namespace {

Isa detect() {
    if (const char* env = std::getenv("HIFS_SIMD"); env != nullptr && std::string(env) == "scalar") {
        return Isa::scalar;
    }
    return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

Isa active_isa() {
    return current().load(std::memory_order_relaxed);
}

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_supported()) {
        isa = Isa::scalar;
    }
    current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out) {
    if (active_isa() == Isa::avx2) {
        avx2::mobius_apply(m, in, out);
    } else {
        scalar::mobius_apply(m, in, out);
    }
}

double max_deviation(const Matrix2& m, const PointSet& in) {
    return active_isa() == Isa::avx2 ? avx2::max_deviation(m, in) : scalar::max_deviation(m, in);
}

void pseudo_distance(const PointSet& z, const PointSet& w, std::span<double> out) {
    if (active_isa() == Isa::avx2) {
        avx2::pseudo_distance(z, w, out);
    } else {
        scalar::pseudo_distance(z, w, out);
    }
}

}  // namespace hifs::kernels
