#include "opseq.h"

#include <cstring>
#include <string>

#include "band.hpp"
#include "convergence.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "generators.hpp"
#include "hermitian.hpp"

struct opseq_herm {
    opseq::HermitianMatrix m;
};
struct opseq_band {
    opseq::BandOperator b;
};
struct opseq_config {
    opseq::ExperimentConfig c;
};
struct opseq_report {
    opseq::ReportBundle bundle;
    std::string csv;
};

namespace {

thread_local std::string g_last_error;

opseq_status fail(opseq_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

// Runs the body behind an exception barrier and maps the library's exception
// taxonomy onto status codes. Nothing ever unwinds across the C boundary.
template <typename F>
opseq_status guarded(F&& body) {
    try {
        return body();
    } catch (const opseq::ParseError& e) {
        return fail(OPSEQ_ERR_PARSE, e.what());
    } catch (const opseq::NotPsdError& e) {
        return fail(OPSEQ_ERR_NOT_PSD, e.what());
    } catch (const opseq::ConvergenceError& e) {
        return fail(OPSEQ_ERR_CONVERGENCE, e.what());
    } catch (const opseq::PremiseError& e) {
        return fail(OPSEQ_ERR_PREMISE, e.what());
    } catch (const opseq::DimensionError& e) {
        return fail(OPSEQ_ERR_DIMENSION, e.what());
    } catch (const opseq::Error& e) {
        return fail(OPSEQ_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(OPSEQ_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(OPSEQ_ERR_INTERNAL, "unknown error");
    }
}

opseq_status check_out(const void* p) {
    if (p == nullptr) return fail(OPSEQ_ERR_INVALID_ARGUMENT, "null output parameter");
    return OPSEQ_OK;
}

opseq_status check_in(const void* p, const char* what) {
    if (p == nullptr)
        return fail(OPSEQ_ERR_INVALID_ARGUMENT, std::string("null ") + what + " handle");
    return OPSEQ_OK;
}

opseq::FinSuppVector make_vector(const long* idx, const double* coef, size_t n) {
    if (n > 0 && (idx == nullptr || coef == nullptr))
        throw opseq::Error("null index or coefficient array");
    opseq::FinSuppVector v;
    for (size_t i = 0; i < n; ++i)
        v.set(idx[i], opseq::cplx(coef[2 * i], coef[2 * i + 1]));
    return v;
}

}  // namespace

extern "C" {

const char* opseq_version(void) { return "0.1.0"; }

const char* opseq_last_error(void) { return g_last_error.c_str(); }

/* ---- Hermitian matrices -------------------------------------------------- */

opseq_status opseq_herm_create(int dim, opseq_herm** out) {
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        if (dim < 1) throw opseq::DimensionError("dim must be >= 1");
        *out = new opseq_herm{opseq::HermitianMatrix(dim)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_random(int dim, uint64_t seed, double scale, opseq_herm** out) {
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_herm{opseq::rand_hermitian(dim, seed, scale)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_random_psd(int dim, uint64_t seed, double scale, opseq_herm** out) {
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_herm{opseq::rand_psd(dim, seed, scale)};
        return OPSEQ_OK;
    });
}

void opseq_herm_free(opseq_herm* h) { delete h; }

opseq_status opseq_herm_dim(const opseq_herm* h, int* out) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    *out = h->m.dim();
    return OPSEQ_OK;
}

opseq_status opseq_herm_set(opseq_herm* h, int i, int j, double re, double im) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    return guarded([&] {
        h->m.set(i, j, opseq::cplx(re, im));
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_get(const opseq_herm* h, int i, int j, double* re, double* im) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(re)) return s;
    if (opseq_status s = check_out(im)) return s;
    return guarded([&] {
        const opseq::cplx v = h->m.entry(i, j);
        *re = v.real();
        *im = v.imag();
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_add_scaled(const opseq_herm* a, const opseq_herm* b, double alpha,
                                   opseq_herm** out) {
    if (opseq_status s = check_in(a, "matrix")) return s;
    if (opseq_status s = check_in(b, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_herm{a->m + b->m.scaled(alpha)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_eigenvalues(const opseq_herm* h, double* out, size_t len) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        if (len != static_cast<size_t>(h->m.dim()))
            throw opseq::DimensionError("eigenvalue buffer length must equal dim");
        const opseq::SpectralDecomposition d = opseq::eigh(h->m);
        for (size_t i = 0; i < len; ++i) out[i] = d.eigenvalues[i];
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_op_norm(const opseq_herm* h, double* out) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = opseq::op_norm(h->m);
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_min_eigenvalue(const opseq_herm* h, double* out) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = opseq::min_eigenvalue(h->m);
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_is_psd(const opseq_herm* h, int* out) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = opseq::is_psd(h->m) ? 1 : 0;
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_leq(const opseq_herm* a, const opseq_herm* b, int* out) {
    if (opseq_status s = check_in(a, "matrix")) return s;
    if (opseq_status s = check_in(b, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = opseq::loewner_leq(a->m, b->m) ? 1 : 0;
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_sqrt_psd(const opseq_herm* h, opseq_herm** out) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_herm{opseq::sqrt_psd(h->m)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_abs(const opseq_herm* h, opseq_herm** out) {
    if (opseq_status s = check_in(h, "matrix")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_herm{opseq::abs_op(h->m)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_herm_sqrt_gap(const opseq_herm* b, const opseq_herm* c, double* lhs,
                                 double* rhs) {
    if (opseq_status s = check_in(b, "matrix")) return s;
    if (opseq_status s = check_in(c, "matrix")) return s;
    if (opseq_status s = check_out(lhs)) return s;
    if (opseq_status s = check_out(rhs)) return s;
    return guarded([&] {
        const opseq::GapBound g = opseq::sqrt_contraction_gap(b->m, c->m);
        *lhs = g.lhs;
        *rhs = g.rhs;
        return OPSEQ_OK;
    });
}

/* ---- band operators -------------------------------------------------------- */

opseq_status opseq_band_zero(opseq_band** out) {
    if (opseq_status s = check_out(out)) return s;
    *out = new opseq_band{opseq::BandOperator::zero()};
    return OPSEQ_OK;
}

opseq_status opseq_band_identity(opseq_band** out) {
    if (opseq_status s = check_out(out)) return s;
    *out = new opseq_band{opseq::BandOperator::identity()};
    return OPSEQ_OK;
}

opseq_status opseq_band_shift_power(int n, opseq_band** out) {
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_band{opseq::shift_power(n)};
        return OPSEQ_OK;
    });
}

void opseq_band_free(opseq_band* b) { delete b; }

opseq_status opseq_band_set_diagonal(opseq_band* b, int offset, const double* head,
                                     size_t head_len, double tail_re, double tail_im) {
    if (opseq_status s = check_in(b, "band")) return s;
    return guarded([&] {
        if (head_len > 0 && head == nullptr) throw opseq::Error("null head array");
        std::vector<opseq::cplx> h(head_len);
        for (size_t i = 0; i < head_len; ++i)
            h[i] = opseq::cplx(head[2 * i], head[2 * i + 1]);
        b->b.set_diagonal(offset, opseq::EvSeq(std::move(h), opseq::cplx(tail_re, tail_im)));
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_width(const opseq_band* b, int* out) {
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    *out = b->b.width();
    return OPSEQ_OK;
}

opseq_status opseq_band_entry(const opseq_band* b, long i, long j, double* re, double* im) {
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(re)) return s;
    if (opseq_status s = check_out(im)) return s;
    return guarded([&] {
        const opseq::cplx v = b->b.entry(i, j);
        *re = v.real();
        *im = v.imag();
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_adjoint(const opseq_band* b, opseq_band** out) {
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_band{opseq::band_adjoint(b->b)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_compose(const opseq_band* a, const opseq_band* b, opseq_band** out) {
    if (opseq_status s = check_in(a, "band")) return s;
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_band{opseq::band_compose(a->b, b->b)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_add_scaled(const opseq_band* a, const opseq_band* b, double re,
                                   double im, opseq_band** out) {
    if (opseq_status s = check_in(a, "band")) return s;
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_band{opseq::band_linear_comb(
            {{opseq::cplx(1.0, 0.0), a->b}, {opseq::cplx(re, im), b->b}})};
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_equals(const opseq_band* a, const opseq_band* b, int* out) {
    if (opseq_status s = check_in(a, "band")) return s;
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    *out = opseq::band_equals(a->b, b->b) ? 1 : 0;
    return OPSEQ_OK;
}

opseq_status opseq_band_is_selfadjoint(const opseq_band* b, int* out) {
    if (opseq_status s = check_in(b, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    *out = opseq::is_selfadjoint(b->b) ? 1 : 0;
    return OPSEQ_OK;
}

opseq_status opseq_band_pairing(const opseq_band* a, const long* idx_x, const double* coef_x,
                                size_t nx, const long* idx_y, const double* coef_y, size_t ny,
                                double* re, double* im) {
    if (opseq_status s = check_in(a, "band")) return s;
    if (opseq_status s = check_out(re)) return s;
    if (opseq_status s = check_out(im)) return s;
    return guarded([&] {
        const opseq::cplx v =
            opseq::pairing(a->b, make_vector(idx_x, coef_x, nx), make_vector(idx_y, coef_y, ny));
        *re = v.real();
        *im = v.imag();
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_section_norm(const opseq_band* a, int window, double* out) {
    if (opseq_status s = check_in(a, "band")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = opseq::band_section_norm(a->b, window);
        return OPSEQ_OK;
    });
}

opseq_status opseq_band_modulus_probe(const opseq_band* a, int window, const long* idx_x,
                                      const double* coef_x, size_t nx, double* value,
                                      double* doubled, int* stable) {
    if (opseq_status s = check_in(a, "band")) return s;
    if (opseq_status s = check_out(value)) return s;
    if (opseq_status s = check_out(doubled)) return s;
    if (opseq_status s = check_out(stable)) return s;
    return guarded([&] {
        const opseq::SectionProbe p =
            opseq::section_modulus_probe(a->b, window, make_vector(idx_x, coef_x, nx));
        *value = p.value;
        *doubled = p.doubled_value;
        *stable = p.stable ? 1 : 0;
        return OPSEQ_OK;
    });
}

/* ---- experiments ------------------------------------------------------------- */

opseq_status opseq_config_parse(const char* text, opseq_config** out) {
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        *out = new opseq_config{opseq::parse_config(text == nullptr ? "" : text)};
        return OPSEQ_OK;
    });
}

opseq_status opseq_config_set_experiment(opseq_config* c, const char* name) {
    if (opseq_status s = check_in(c, "config")) return s;
    return guarded([&] {
        if (name == nullptr || !opseq::is_experiment_name(name))
            throw opseq::ParseError({"experiment: unknown name '" +
                                     std::string(name == nullptr ? "(null)" : name) + "'"});
        c->c.experiment = name;
        return OPSEQ_OK;
    });
}

opseq_status opseq_config_set_int(opseq_config* c, const char* key, long long value) {
    if (opseq_status s = check_in(c, "config")) return s;
    return guarded([&] {
        const std::string k = key == nullptr ? "" : key;
        if (k == "dim") {
            if (value < 1 || value > 64) throw opseq::ParseError({"dim: must be in [1, 64]"});
            c->c.dim = static_cast<int>(value);
        } else if (k == "n_max") {
            if (value < 1 || value > 100000)
                throw opseq::ParseError({"n_max: must be in [1, 100000]"});
            c->c.n_max = static_cast<int>(value);
        } else if (k == "k") {
            if (value < 1) throw opseq::ParseError({"k: must be >= 1"});
            c->c.k = static_cast<int>(value);
        } else {
            throw opseq::ParseError({"unknown integer key '" + k + "'"});
        }
        return OPSEQ_OK;
    });
}

opseq_status opseq_config_set_seed(opseq_config* c, uint64_t seed) {
    if (opseq_status s = check_in(c, "config")) return s;
    c->c.seed = seed;
    return OPSEQ_OK;
}

opseq_status opseq_config_set_tol(opseq_config* c, double tol) {
    if (opseq_status s = check_in(c, "config")) return s;
    return guarded([&] {
        if (!(tol > 0.0)) throw opseq::ParseError({"tol: must be positive"});
        c->c.tol = tol;
        return OPSEQ_OK;
    });
}

opseq_status opseq_config_set_rate(opseq_config* c, const char* rate) {
    if (opseq_status s = check_in(c, "config")) return s;
    return guarded([&] {
        if (rate == nullptr) throw opseq::ParseError({"rate: null"});
        try {
            opseq::parse_rate(rate);
        } catch (const opseq::Error& e) {
            throw opseq::ParseError({e.what()});
        }
        c->c.rate = rate;
        return OPSEQ_OK;
    });
}

void opseq_config_free(opseq_config* c) { delete c; }

opseq_status opseq_run(const opseq_config* c, opseq_report** out) {
    if (opseq_status s = check_in(c, "config")) return s;
    if (opseq_status s = check_out(out)) return s;
    return guarded([&] {
        auto rep = new opseq_report{opseq::run_experiment(c->c), {}};
        rep->csv = opseq::emit_csv(rep->bundle);
        *out = rep;
        return OPSEQ_OK;
    });
}

opseq_status opseq_report_passed(const opseq_report* r, int* out) {
    if (opseq_status s = check_in(r, "report")) return s;
    if (opseq_status s = check_out(out)) return s;
    *out = r->bundle.passed ? 1 : 0;
    return OPSEQ_OK;
}

opseq_status opseq_report_csv(const opseq_report* r, const char** out) {
    if (opseq_status s = check_in(r, "report")) return s;
    if (opseq_status s = check_out(out)) return s;
    *out = r->csv.c_str();
    return OPSEQ_OK;
}

void opseq_report_free(opseq_report* r) { delete r; }

}  // extern "C"
