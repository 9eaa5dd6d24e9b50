#include "puedet/matrix.hpp"

namespace puedet {

void matvec_add(const Matrix& w, const double* x, Vector& out) {
    const std::size_t m = w.rows(), n = w.cols();
    const double* row = w.data();
    for (std::size_t i = 0; i < m; ++i, row += n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        out[i] += acc;
    }
}

void tmatvec_add(const Matrix& w, const Vector& y, Vector& out) {
    const std::size_t m = w.rows(), n = w.cols();
    const double* row = w.data();
    for (std::size_t i = 0; i < m; ++i, row += n) {
        const double yi = y[i];
        for (std::size_t j = 0; j < n; ++j) out[j] += row[j] * yi;
    }
}

void add_outer(Matrix& g, const Vector& d, const double* x) {
    const std::size_t m = g.rows(), n = g.cols();
    double* row = g.data();
    for (std::size_t i = 0; i < m; ++i, row += n) {
        const double di = d[i];
        for (std::size_t j = 0; j < n; ++j) row[j] += di * x[j];
    }
}

Vector matvec(const Matrix& w, const Vector& x) {
    if (x.size() != w.cols()) {
        throw ValidationError("matvec: dimension mismatch");
    }
    Vector out(w.rows(), 0.0);
    matvec_add(w, x.data(), out);
    return out;
}

double dot(const Vector& a, const Vector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

void add_column(const Matrix& b, Vector& out) {
    const double* p = b.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
}

void add_to_column(Matrix& gb, const Vector& d) {
    double* p = gb.data();
    for (std::size_t i = 0; i < d.size(); ++i) p[i] += d[i];
}

}  // namespace puedet
