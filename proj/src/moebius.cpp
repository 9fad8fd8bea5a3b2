#include "hifs/moebius.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hifs/errors.hpp"

namespace hifs {

namespace {

constexpr double kShapeTol = 1e-10;

Matrix2 multiply(const Matrix2& x, const Matrix2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

Matrix2 normalize_det(const Matrix2& m) {
    const Complex det = m[0] * m[3] - m[1] * m[2];
    if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det))) {
        throw DomainError("Moebius matrix is singular or not finite");
    }
    const Complex s = std::sqrt(det);
    return {m[0] / s, m[1] / s, m[2] / s, m[3] / s};
}

void canonical_sign(Matrix2& m) {
    for (const Complex& e : m) {
        if (std::abs(e) > 1e-300) {
            if (e.real() < 0.0 || (e.real() == 0.0 && e.imag() < 0.0)) {
                for (Complex& x : m) {
                    x = -x;
                }
            }
            return;
        }
    }
}

double scale_of(const Matrix2& m) {
    double s = 1.0;
    for (const Complex& e : m) {
        s = std::max(s, std::abs(e));
    }
    return s;
}

bool has_disc_shape(const Matrix2& m) {
    const double tol = kShapeTol * scale_of(m);
    return std::abs(m[3] - std::conj(m[0])) <= tol && std::abs(m[2] - std::conj(m[1])) <= tol;
}

// Project onto the exact automorphism shape and renormalize |alpha|^2 - |beta|^2 = 1.
Matrix2 snap_disc(const Matrix2& m) {
    const Complex alpha = 0.5 * (m[0] + std::conj(m[3]));
    const Complex beta = 0.5 * (m[1] + std::conj(m[2]));
    const double q = std::norm(alpha) - std::norm(beta);
    if (!(q > 0.0)) {
        throw DomainError("matrix does not preserve the unit disc");
    }
    const double s = std::sqrt(q);
    const Complex a = alpha / s;
    const Complex b = beta / s;
    return {a, b, std::conj(b), std::conj(a)};
}

bool has_real_shape(const Matrix2& m) {
    const double tol = kShapeTol * scale_of(m);
    for (const Complex& e : m) {
        if (std::abs(e.imag()) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string_view to_string(DomainTag tag) {
    switch (tag) {
        case DomainTag::disc:
            return "disc";
        case DomainTag::half_plane:
            return "half_plane";
        case DomainTag::generic:
            return "generic";
    }
    return "generic";
}

MoebiusMap::MoebiusMap() : m_{Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)}, tag_(DomainTag::disc) {}

namespace {

// Removes the phase of a scalar multiple of [alpha beta; conj(beta) conj(alpha)]
// using m0 m3 = lambda^2 |alpha|^2. Unlike the determinant, this product has no
// cancellation when |alpha| and |beta| are both large.
Matrix2 strip_disc_phase(const Matrix2& m) {
    const Complex p = m[0] * m[3];
    if (!(std::abs(p) > 0.0) || !std::isfinite(std::abs(p)) || !std::isfinite(scale_of(m))) {
        throw DomainError("matrix is not a disc automorphism");
    }
    const Complex u = std::sqrt(p / std::abs(p));
    return {m[0] / u, m[1] / u, m[2] / u, m[3] / u};
}

}  // namespace

MoebiusMap MoebiusMap::from_matrix(const Matrix2& raw, DomainTag tag) {
    Matrix2 m = tag == DomainTag::disc ? strip_disc_phase(raw) : normalize_det(raw);
    switch (tag) {
        case DomainTag::disc:
            if (!has_disc_shape(m)) {
                throw DomainError("matrix is not a disc automorphism");
            }
            m = snap_disc(m);
            break;
        case DomainTag::half_plane:
            if (!has_real_shape(m)) {
                // a real matrix with negative determinant normalizes to an imaginary one
                throw DomainError("matrix is not a half-plane automorphism");
            }
            for (Complex& e : m) {
                e = Complex(e.real(), 0.0);
            }
            break;
        case DomainTag::generic:
            break;
    }
    canonical_sign(m);
    return MoebiusMap(m, tag);
}

MoebiusMap MoebiusMap::infer(const Matrix2& raw) {
    const Matrix2 m = normalize_det(raw);
    if (has_disc_shape(m) && std::norm(m[0]) > std::norm(m[1])) {
        return from_matrix(m, DomainTag::disc);
    }
    return from_matrix(m, DomainTag::generic);
}

MoebiusMap MoebiusMap::rotation(double theta) {
    const Complex h = std::polar(1.0, 0.5 * theta);
    return from_matrix({h, Complex(0.0), Complex(0.0), std::conj(h)}, DomainTag::disc);
}

Complex MoebiusMap::operator()(Complex z) const {
    const Complex den = m_[2] * z + m_[3];
    if (den == Complex(0.0, 0.0)) {
        throw SingularityError("evaluation at the pole of a Moebius map");
    }
    return (m_[0] * z + m_[1]) / den;
}

Complex MoebiusMap::derivative(Complex z) const {
    const Complex den = m_[2] * z + m_[3];
    if (den == Complex(0.0, 0.0)) {
        throw SingularityError("derivative at the pole of a Moebius map");
    }
    // det is 1 after normalization
    return 1.0 / (den * den);
}

bool MoebiusMap::is_identity(double tol) const {
    return std::abs(m_[1]) <= tol && std::abs(m_[2]) <= tol && std::abs(m_[0] - m_[3]) <= tol;
}

MoebiusMap make_disc_auto_raw(Complex a, double theta) {
    if (!(std::abs(a) < 1.0) || !std::isfinite(theta)) {
        throw DomainError("disc automorphism center must lie inside the disc");
    }
    const Complex e = std::polar(1.0, theta);
    return MoebiusMap::from_matrix({e, e * a, std::conj(a), Complex(1.0)}, DomainTag::disc);
}

MoebiusMap make_disc_auto(DiscPoint a, double theta) {
    return make_disc_auto_raw(a.value(), theta);
}

MoebiusMap compose(const MoebiusMap& g, const MoebiusMap& f) {
    const DomainTag tg = g.tag();
    const DomainTag tf = f.tag();
    if ((tg == DomainTag::disc && tf == DomainTag::half_plane) ||
        (tg == DomainTag::half_plane && tf == DomainTag::disc)) {
        throw PreconditionError("cannot compose a disc map with a half-plane map");
    }
    const DomainTag tag = tg == tf ? tg : DomainTag::generic;
    return MoebiusMap::from_matrix(multiply(g.matrix(), f.matrix()), tag);
}

MoebiusMap inverse(const MoebiusMap& g) {
    const Matrix2& m = g.matrix();
    return MoebiusMap::from_matrix({m[3], -m[1], -m[2], m[0]}, g.tag());
}

Complex apply(const MoebiusMap& g, Complex z) {
    return g(z);
}

Complex deriv(const MoebiusMap& g, Complex z) {
    return g.derivative(z);
}

MoebiusMap halfplane_to_disc(const MoebiusMap& h) {
    const Complex i(0.0, 1.0);
    const Matrix2 cayley{Complex(1.0), -i, Complex(1.0), i};
    const Matrix2 cayley_inv{i, i, Complex(-1.0), Complex(1.0)};
    const Matrix2 m = multiply(cayley, multiply(h.matrix(), cayley_inv));
    return MoebiusMap::from_matrix(m, h.tag() == DomainTag::half_plane ? DomainTag::disc : DomainTag::generic);
}

MoebiusMap halfplane_translation(Complex t) {
    if (t.imag() < 0.0) {
        throw DomainError("half-plane translation must have nonnegative imaginary part");
    }
    if (t.imag() == 0.0) {
        return halfplane_to_disc(
            MoebiusMap::from_matrix({Complex(1.0), Complex(t.real()), Complex(0.0), Complex(1.0)},
                                    DomainTag::half_plane));
    }
    return halfplane_to_disc(MoebiusMap::from_matrix({Complex(1.0), t, Complex(0.0), Complex(1.0)}));
}

double matrix_distance(const MoebiusMap& g, const MoebiusMap& f) {
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        plus += std::norm(g.matrix()[k] - f.matrix()[k]);
        minus += std::norm(g.matrix()[k] + f.matrix()[k]);
    }
    return std::sqrt(std::min(plus, minus));
}

std::string_view to_string(AutKind kind) {
    switch (kind) {
        case AutKind::identity:
            return "identity";
        case AutKind::elliptic:
            return "elliptic";
        case AutKind::parabolic:
            return "parabolic";
        case AutKind::hyperbolic:
            return "hyperbolic";
    }
    return "identity";
}

AutClass classify_auto(const MoebiusMap& g) {
    if (!g.is_disc_automorphism()) {
        throw PreconditionError("classify_auto needs a disc automorphism");
    }
    AutClass out;
    if (g.is_identity()) {
        return out;
    }
    Complex alpha = g.matrix()[0];
    Complex beta = g.matrix()[1];
    if (alpha.real() < 0.0) {
        alpha = -alpha;
        beta = -beta;
    }
    const double half_trace = alpha.real();
    const double gap = half_trace - 1.0;
    const Complex i(0.0, 1.0);
    const Complex beta_bar = std::conj(beta);

    if (std::abs(2.0 * gap) <= kParabolicTol) {
        out.kind = AutKind::parabolic;
        out.borderline = std::abs(gap) > 64.0 * std::numeric_limits<double>::epsilon();
        const Complex p = i * alpha.imag() / beta_bar;
        out.fixed_points.push_back(p / std::abs(p));
        return out;
    }
    if (gap < 0.0) {
        out.kind = AutKind::elliptic;
        Complex p(0.0, 0.0);
        if (std::abs(beta) > 0.0) {
            // small root via the product of roots, avoiding cancellation
            const double s = alpha.imag() >= 0.0 ? 1.0 : -1.0;
            const double big = alpha.imag() + s * std::sqrt(std::max(0.0, 1.0 - half_trace * half_trace));
            p = i * beta / big;
        }
        out.fixed_points.push_back(p);
        out.rotation_angle = std::arg(g.derivative(p));
        return out;
    }
    out.kind = AutKind::hyperbolic;
    const double root = std::sqrt(half_trace * half_trace - 1.0);
    Complex p1 = (i * alpha.imag() - root) / beta_bar;
    Complex p2 = (i * alpha.imag() + root) / beta_bar;
    p1 /= std::abs(p1);
    p2 /= std::abs(p2);
    if (std::abs(g.derivative(p1)) > std::abs(g.derivative(p2))) {
        std::swap(p1, p2);
    }
    out.fixed_points = {p1, p2};
    out.translation_length = std::acosh(half_trace);
    return out;
}

namespace {

// sinh(s t) / sinh(t), continuous through t = 0
Complex sinh_ratio(double s, Complex t) {
    if (std::abs(t) < 1e-4) {
        return s * (1.0 + (s * s - 1.0) * t * t / 6.0);
    }
    return std::sinh(s * t) / std::sinh(t);
}

}  // namespace

MoebiusMap kth_root(const MoebiusMap& g, int k) {
    if (k < 1) {
        throw PreconditionError("kth_root needs k >= 1");
    }
    if (!g.is_disc_automorphism()) {
        throw PreconditionError("kth_root needs a disc automorphism");
    }
    if (k == 1) {
        return g;
    }
    Matrix2 m = g.matrix();
    if (m[0].real() < 0.0) {
        for (Complex& e : m) {
            e = -e;
        }
    }
    // M has eigenvalues e^{+t}, e^{-t} with cosh t = tr/2. By Cayley-Hamilton,
    // M^s = [sinh(st) M - sinh((s-1)t) I] / sinh t, which reduces to the
    // unipotent formula I + s (M - I) as t -> 0.
    const Complex half_trace = 0.5 * (m[0] + m[3]);
    const Complex t = std::acosh(half_trace);
    const double s = 1.0 / k;
    const Complex p = sinh_ratio(s, t);
    const Complex q = sinh_ratio(s - 1.0, t);
    const Matrix2 r{p * m[0] - q, p * m[1], p * m[2], p * m[3] - q};
    return MoebiusMap::from_matrix(r, DomainTag::disc);
}

MoebiusMap power(const MoebiusMap& g, int k) {
    if (k < 0) {
        return power(inverse(g), -k);
    }
    MoebiusMap result = MoebiusMap::from_matrix(MoebiusMap().matrix(), g.tag());
    MoebiusMap base = g;
    while (k > 0) {
        if (k & 1) {
            result = compose(base, result);
        }
        base = compose(base, base);
        k >>= 1;
    }
    return result;
}

}  // namespace hifs
