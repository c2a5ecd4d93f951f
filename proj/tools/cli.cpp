#include "cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "htype/algebra.hpp"
#include "htype/estimates.hpp"
#include "htype/geometry.hpp"
#include "htype/heatkernel.hpp"
#include "htype/io.hpp"
#include "htype/polynomial.hpp"
#include "htype/simulate.hpp"

namespace htype::cli {

namespace {

// Raised by handlers for bad flag values that CLI11 cannot check itself.
struct FlagError : std::invalid_argument {
    FlagError(const std::string& flag, const std::string& what) : std::invalid_argument(flag + ": " + what) {}
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Sink {
public:
    Sink(std::ostream& fallback, const std::string& path) : fallback_(fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw FlagError("--out", "cannot write '" + path + "'");
        }
    }
    std::ostream& os() { return file_ ? *file_ : fallback_; }

private:
    std::ostream& fallback_;
    std::unique_ptr<std::ofstream> file_;
};

void emit_json(std::ostream& fallback, const std::string& path, const nlohmann::json& doc) {
    Sink sink(fallback, path);
    sink.os() << doc.dump(2) << '\n';
}

Structure resolve_structure(const std::string& preset, const std::string& file) {
    if (!file.empty()) return load_structure(file);
    try {
        return structure_preset(preset);
    } catch (const std::invalid_argument& e) {
        throw FlagError("--preset", e.what());
    }
}

std::vector<double> parse_range(const std::string& flag, const std::string& text) {
    // a:b:k -> k evenly spaced points on [a, b]; a single number is a one-point grid.
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 1) return {std::stod(parts[0])};
        if (parts.size() != 3) throw FlagError(flag, "expected a:b:k");
        const double a = std::stod(parts[0]), b = std::stod(parts[1]);
        const int k = std::stoi(parts[2]);
        if (k < 1) throw FlagError(flag, "point count must be >= 1");
        std::vector<double> v(k);
        for (int i = 0; i < k; ++i) v[i] = k == 1 ? a : a + (b - a) * i / (k - 1);
        return v;
    } catch (const FlagError&) {
        throw;
    } catch (const std::exception&) {
        throw FlagError(flag, "expected a:b:k, got '" + text + "'");
    }
}

// ---------------------------------------------------------------------------

void add_group(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* group = app.add_subcommand("group", "construct H-type structures and use the group law");
    group->require_subcommand(1);

    struct Opts {
        std::string preset = "heisenberg", file, out, g, h;
        long long k = 0, two_n = 0, m = 0;
    };
    auto o = std::make_shared<Opts>();

    auto* show = group->add_subcommand("show", "print a structure as JSON");
    show->add_option("--preset", o->preset, "heisenberg[-N] | complex-heisenberg | clifford-M[xC]");
    show->add_option("--structure", o->file, "structure JSON file")->check(CLI::ExistingFile);
    show->add_option("--out", o->out, "output file");
    show->callback([&action, &out, o] {
        action = [&out, o] { emit_json(out, o->out, structure_to_json(resolve_structure(o->preset, o->file))); };
    });

    auto* mul = group->add_subcommand("mul", "group product left * right");
    mul->add_option("--preset", o->preset);
    mul->add_option("--structure", o->file)->check(CLI::ExistingFile);
    mul->add_option("--left", o->g, "x1,...,x2n;z1,...,zm")->required();
    mul->add_option("--right", o->h, "x1,...,x2n;z1,...,zm")->required();
    mul->callback([&action, &out, o] {
        action = [&out, o] {
            const Structure s = resolve_structure(o->preset, o->file);
            GroupPoint g, h;
            try {
                g = parse_group_point(o->g, s);
            } catch (const std::invalid_argument& e) {
                throw FlagError("--left", e.what());
            }
            try {
                h = parse_group_point(o->h, s);
            } catch (const std::invalid_argument& e) {
                throw FlagError("--right", e.what());
            }
            emit_json(out, "", to_json(group_mul(s, g, h)));
        };
    });

    auto* hr = group->add_subcommand("hurwitz", "Hurwitz-Radon number rho(k)");
    hr->add_option("--k", o->k)->required()->check(CLI::PositiveNumber);
    hr->callback([&action, &out, o] {
        action = [&out, o] {
            emit_json(out, "", {{"schema", kSchemaVersion}, {"k", o->k}, {"rho", hurwitz_radon(o->k)}});
        };
    });

    auto* ex = group->add_subcommand("exists", "whether an H-type group with dimensions (2n, m) exists");
    ex->add_option("--two-n", o->two_n)->required()->check(CLI::PositiveNumber);
    ex->add_option("--m", o->m)->required()->check(CLI::PositiveNumber);
    ex->callback([&action, &out, o] {
        action = [&out, o] {
            if (o->two_n % 2 != 0) throw FlagError("--two-n", "must be even");
            emit_json(out, "",
                      {{"schema", kSchemaVersion}, {"two_n", o->two_n}, {"m", o->m}, {"exists", exists_htype(o->two_n, o->m)}});
        };
    });
}

void add_dist(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    struct Opts {
        int n = 1, m = 1;
        double x = 0, z = 0;
        std::string format = "text";
    };
    auto o = std::make_shared<Opts>();
    auto* dist = app.add_subcommand("dist", "Carnot-Caratheodory distance from the identity");
    dist->add_option("--n", o->n)->check(CLI::PositiveNumber);
    dist->add_option("--m", o->m)->check(CLI::PositiveNumber);
    dist->add_option("--x", o->x, "|x|")->required()->check(CLI::NonNegativeNumber);
    dist->add_option("--z", o->z, "|z|")->required()->check(CLI::NonNegativeNumber);
    dist->add_option("--format", o->format)->check(CLI::IsMember({"text", "json"}));
    dist->callback([&action, &out, o] {
        action = [&out, o] {
            const DistanceResult r = cc_distance(o->x, o->z);
            static const char* branches[] = {"identity", "horizontal", "vertical", "generic"};
            const char* branch = branches[static_cast<int>(r.branch)];
            if (o->format == "json") {
                emit_json(out, "", {{"schema", kSchemaVersion}, {"d", r.d}, {"theta", r.theta}, {"branch", branch}});
            } else {
                out << "d=" << format_number(r.d) << '\n'
                    << "theta=" << format_number(r.theta) << '\n'
                    << "branch=" << branch << '\n';
            }
        };
    });
}

void add_geodesic(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    struct Opts {
        std::string preset = "heisenberg", file, x, z, out;
        int samples = 101, loops = 1;
    };
    auto o = std::make_shared<Opts>();
    auto* geo = app.add_subcommand("geodesic", "sample the minimizing geodesic from the identity to (x, z)");
    geo->add_option("--preset", o->preset);
    geo->add_option("--structure", o->file)->check(CLI::ExistingFile);
    geo->add_option("--x", o->x, "x1,...,x2n")->required();
    geo->add_option("--z", o->z, "z1,...,zm")->required();
    geo->add_option("--samples", o->samples)->check(CLI::Range(2, 1000000));
    geo->add_option("--loops", o->loops, "circle family when x = 0")->check(CLI::PositiveNumber);
    geo->add_option("--out", o->out, "CSV output file");
    geo->callback([&action, &out, o] {
        action = [&out, o] {
            const Structure s = resolve_structure(o->preset, o->file);
            const GroupPoint g = parse_group_point(o->x + ";" + o->z, s);
            const GeodesicParams p = geodesic_from_endpoint(s, g, o->loops);
            Sink sink(out, o->out);
            std::ostream& os = sink.os();
            os << "t";
            for (int i = 1; i <= s.horizontal_dim(); ++i) os << ",x" << i;
            for (int j = 1; j <= s.m(); ++j) os << ",z" << j;
            os << '\n';
            for (int k = 0; k < o->samples; ++k) {
                const double t = static_cast<double>(k) / (o->samples - 1);
                const GroupPoint q = geodesic_point(s, p, t);
                os << format_number(t);
                for (Eigen::Index i = 0; i < q.x.size(); ++i) os << ',' << format_number(q.x(i));
                for (Eigen::Index j = 0; j < q.z.size(); ++j) os << ',' << format_number(q.z(j));
                os << '\n';
            }
        };
    });
}

EvalResult evaluate_kernel(const KernelQuery& q, const std::string& method) {
    if (method == "hankel") {
        if (q.m % 2 == 0) throw FlagError("--method", "hankel needs odd m");
        if (!(q.s > 0)) throw FlagError("--method", "hankel needs |z| > 0");
        return pt_hankel(q);
    }
    return pt(q);
}

void add_heat(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    struct Opts {
        int n = 1, m = 1;
        double t = 1, x = 0, z = 0, tol = 1e-10;
        std::string method = "bessel", xs, zs, out;
    };
    auto o = std::make_shared<Opts>();
    auto* heat = app.add_subcommand("heat", "heat kernel evaluation");
    heat->require_subcommand(1);
    auto common = [o](CLI::App* c) {
        c->add_option("--n", o->n)->check(CLI::PositiveNumber);
        c->add_option("--m", o->m)->check(CLI::PositiveNumber);
        c->add_option("--t", o->t)->check(CLI::PositiveNumber);
        c->add_option("--tol", o->tol, "relative tolerance")->check(CLI::Range(1e-15, 1e-2));
        c->add_option("--method", o->method)->check(CLI::IsMember({"bessel", "hankel"}));
    };

    auto* ev = heat->add_subcommand("eval", "p_t at one point, as JSON");
    common(ev);
    ev->add_option("--x", o->x, "|x|")->required()->check(CLI::NonNegativeNumber);
    ev->add_option("--z", o->z, "|z|")->required()->check(CLI::NonNegativeNumber);
    ev->callback([&action, &out, o] {
        action = [&out, o] {
            KernelQuery q{o->n, o->m, o->t, o->x, o->z, o->tol, 0.0};
            const EvalResult r = evaluate_kernel(q, o->method);
            emit_json(out, "", to_json(r));
            if (!r.converged) throw NumericalFailure("heat eval: " + r.diagnostic);
        };
    });

    auto* table = heat->add_subcommand("table", "p_t over a grid, as CSV");
    common(table);
    table->add_option("--x-grid", o->xs, "|x| values a:b:k")->required();
    table->add_option("--z-grid", o->zs, "|z| values a:b:k")->required();
    table->add_option("--out", o->out, "CSV output file");
    table->callback([&action, &out, o] {
        action = [&out, o] {
            const auto xs = parse_range("--x-grid", o->xs);
            const auto zs = parse_range("--z-grid", o->zs);
            for (double v : xs)
                if (v < 0) throw FlagError("--x-grid", "values must be nonnegative");
            for (double v : zs)
                if (v < 0) throw FlagError("--z-grid", "values must be nonnegative");
            Sink sink(out, o->out);
            std::ostream& os = sink.os();
            os << "x_norm,z_norm,value,err,method,converged\n";
            bool all_ok = true;
            for (double x : xs)
                for (double z : zs) {
                    KernelQuery q{o->n, o->m, o->t, x, z, o->tol, 0.0};
                    const EvalResult r = evaluate_kernel(q, o->method);
                    all_ok = all_ok && r.converged;
                    os << format_number(x) << ',' << format_number(z) << ',' << format_number(r.value) << ','
                       << format_number(r.abs_err) << ',' << r.method << ',' << (r.converged ? 1 : 0) << '\n';
                }
            if (!all_ok) throw NumericalFailure("heat table: some points did not converge");
        };
    });
}

void add_poly(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    struct Opts {
        std::string preset = "heisenberg", file, p, op = "L", t;
        int n = 1;
    };
    auto o = std::make_shared<Opts>();
    auto* poly = app.add_subcommand("poly", "exact polynomial calculus");
    poly->require_subcommand(1);

    auto parse = [](const Structure& s, const std::string& text) {
        try {
            return parse_polynomial<Rational>(text, s.n(), s.m());
        } catch (const std::exception& e) {
            throw FlagError("--p", e.what());
        }
    };

    auto* ap = poly->add_subcommand("apply", "apply L, X_i, Xhat_i, |grad|^2 or Gamma to a polynomial");
    ap->add_option("--preset", o->preset);
    ap->add_option("--structure", o->file)->check(CLI::ExistingFile);
    ap->add_option("--p", o->p, "polynomial, e.g. '1/2*x1^2 - z1'")->required();
    ap->add_option("--op", o->op, "L | L3 | X<i> | Xhat<i> | grad | gamma");
    ap->callback([&action, &out, o, parse] {
        action = [&out, o, parse] {
            const Structure s = resolve_structure(o->preset, o->file);
            const RationalPolynomial p = parse(s, o->p);
            RationalPolynomial r;
            auto index = [&](std::size_t skip) {
                int i = 0;
                try {
                    i = std::stoi(o->op.substr(skip));
                } catch (const std::exception&) {
                    throw FlagError("--op", "bad field index in '" + o->op + "'");
                }
                if (i < 1 || i > s.horizontal_dim()) throw FlagError("--op", "field index out of range");
                return i;
            };
            if (o->op == "L")
                r = apply_l(s, p);
            else if (o->op == "L3")
                r = apply_l_three_terms(s, p);
            else if (o->op == "grad")
                r = grad_sq(s, p);
            else if (o->op == "gamma")
                r = carre_du_champ(s, p);
            else if (o->op.rfind("Xhat", 0) == 0)
                r = apply_xi_hat(s, p, index(4));
            else if (o->op.rfind("X", 0) == 0)
                r = apply_xi(s, p, index(1));
            else
                throw FlagError("--op", "unknown operator '" + o->op + "'");
            out << r.to_string() << '\n';
        };
    });

    auto* hp = poly->add_subcommand("heat", "P_t p for a polynomial p");
    hp->add_option("--preset", o->preset);
    hp->add_option("--structure", o->file)->check(CLI::ExistingFile);
    hp->add_option("--p", o->p)->required();
    hp->add_option("--t", o->t, "rational time, e.g. 1/2")->required();
    hp->callback([&action, &out, o, parse] {
        action = [&out, o, parse] {
            const Structure s = resolve_structure(o->preset, o->file);
            Rational t;
            try {
                t = Rational(o->t);
            } catch (const std::exception&) {
                throw FlagError("--t", "expected a rational number");
            }
            out << heat_poly(s, parse(s, o->p), t).to_string() << '\n';
        };
    });

    auto* k2 = poly->add_subcommand("k2", "k_2(t) for f = x1 + z1 x2 on H_n");
    k2->add_option("--n", o->n)->check(CLI::PositiveNumber);
    k2->add_option("--t", o->t, "rational time at which to evaluate");
    k2->callback([&action, &out, o] {
        action = [&out, o] {
            const K2Parts parts = k2_parts(o->n);
            auto strs = [](const RationalSeries& c) {
                std::vector<std::string> v;
                for (const auto& r : c) v.push_back(r.str());
                return v;
            };
            const K2Maximum mx = maximize_k2(o->n);
            nlohmann::json doc{{"schema", kSchemaVersion},
                               {"n", o->n},
                               {"numerator", strs(parts.numerator)},
                               {"denominator", strs(parts.denominator)},
                               {"argmax", mx.t},
                               {"max", mx.value}};
            if (!o->t.empty()) {
                Rational t;
                try {
                    t = Rational(o->t);
                } catch (const std::exception&) {
                    throw FlagError("--t", "expected a rational number");
                }
                doc["t"] = t.str();
                doc["value"] = k2_ratio_exact(o->n, t).str();
            }
            emit_json(out, "", doc);
        };
    });
}

void add_verify(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    struct Opts {
        std::string preset = "heisenberg", file, out, kind = "all";
        int n = 1, m = 1, grid = 20;
        double d0_min = 2.0, tol = 1e-7, drift = 0.05;
        bool refine = false;
    };
    auto o = std::make_shared<Opts>();
    auto* verify = app.add_subcommand("verify", "verification reports");
    verify->require_subcommand(1);

    auto* vg = verify->add_subcommand("group", "check the H-type identities of a structure");
    vg->add_option("--preset", o->preset);
    vg->add_option("--structure", o->file)->check(CLI::ExistingFile);
    vg->add_option("--out", o->out, "report.json");
    vg->callback([&action, &out, o] {
        action = [&out, o] {
            const VerificationReport r = verify_htype(resolve_structure(o->preset, o->file));
            emit_json(out, o->out, to_json(r));
            if (!r.pass) throw NumericalFailure("verify group: some identities fail");
        };
    });

    auto* vb = verify->add_subcommand("bounds", "scan kernel and gradient ratios to their envelopes");
    vb->add_option("--n", o->n)->check(CLI::PositiveNumber);
    vb->add_option("--m", o->m)->check(CLI::PositiveNumber);
    vb->add_option("--grid", o->grid, "points per axis")->check(CLI::Range(2, 400));
    vb->add_option("--d0-min", o->d0_min)->check(CLI::PositiveNumber);
    vb->add_option("--tol", o->tol)->check(CLI::Range(1e-14, 1e-2));
    vb->add_option("--kind", o->kind)->check(CLI::IsMember({"all", "kernel", "gradient", "crude-gradient", "vertical-gradient"}));
    vb->add_flag("--refine", o->refine, "also rescan on a 2x refined grid and report drift");
    vb->add_option("--max-drift", o->drift)->check(CLI::PositiveNumber);
    vb->add_option("--out", o->out, "report.json");
    vb->callback([&action, &out, o] {
        action = [&out, o] {
            ScanGrid g;
            g.n_d = o->grid;
            g.n_u = o->grid;
            g.rel_tol = o->tol;
            g.d_min = std::min(o->d0_min, g.d_max);
            std::vector<EnvelopeKind> kinds;
            for (EnvelopeKind k : {EnvelopeKind::kernel, EnvelopeKind::gradient, EnvelopeKind::crude_gradient,
                                   EnvelopeKind::vertical_gradient})
                if (o->kind == "all" || o->kind == envelope_name(k)) kinds.push_back(k);
            nlohmann::json doc{{"schema", kSchemaVersion}, {"n", o->n}, {"m", o->m}};
            nlohmann::json scans = nlohmann::json::array();
            bool pass = true;
            for (EnvelopeKind k : kinds) {
                if (o->refine) {
                    const DriftReport d = refinement_drift(o->n, o->m, k, g, o->d0_min, o->drift);
                    pass = pass && d.pass;
                    scans.push_back(to_json(d));
                } else {
                    const ScanReport r = scan_ratio(o->n, o->m, k, g, o->d0_min);
                    pass = pass && r.pass;
                    scans.push_back(to_json(r));
                }
            }
            doc["scans"] = std::move(scans);
            doc["pass"] = pass;
            emit_json(out, o->out, doc);
            if (!pass) throw NumericalFailure("verify bounds: a scan failed");
        };
    });
}

void add_simulate(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    struct Opts {
        int n = 1, m = 1, paths = 1000, steps = 1000;
        double t = 1.0;
        std::uint64_t seed = 1;
        std::string preset, file, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sim = app.add_subcommand("simulate", "horizontal Brownian motion terminal points, as CSV");
    sim->add_option("--n", o->n)->check(CLI::PositiveNumber);
    sim->add_option("--m", o->m)->check(CLI::PositiveNumber);
    sim->add_option("--t", o->t)->check(CLI::PositiveNumber);
    sim->add_option("--paths", o->paths)->check(CLI::PositiveNumber);
    sim->add_option("--steps", o->steps)->check(CLI::PositiveNumber);
    sim->add_option("--seed", o->seed);
    sim->add_option("--preset", o->preset, "overrides --n/--m");
    sim->add_option("--structure", o->file)->check(CLI::ExistingFile);
    sim->add_option("--out", o->out, "CSV output file");
    sim->callback([&action, &out, o] {
        action = [&out, o] {
            Structure s = [&] {
                if (!o->preset.empty() || !o->file.empty()) return resolve_structure(o->preset, o->file);
                try {
                    return structure_for_dims(o->n, o->m);
                } catch (const std::invalid_argument& e) {
                    throw FlagError("--m", e.what());
                }
            }();
            const SampleBatch b = simulate(s, SimConfig{o->t, o->steps, o->paths, o->seed});
            Sink sink(out, o->out);
            std::ostream& os = sink.os();
            const int h = 2 * b.n;
            for (int i = 1; i <= h; ++i) os << (i > 1 ? "," : "") << 'x' << i;
            for (int j = 1; j <= b.m; ++j) os << ",z" << j;
            os << '\n';
            for (std::size_t p = 0; p < b.size(); ++p) {
                for (int i = 0; i < h; ++i) os << (i > 0 ? "," : "") << format_number(b.xs[p * h + i]);
                for (int j = 0; j < b.m; ++j) os << ',' << format_number(b.zs[p * b.m + j]);
                os << '\n';
            }
        };
    });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"H-type group geometry and heat kernel toolkit", "htype"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::function<void()> action;
    add_group(app, action, out);
    add_dist(app, action, out);
    add_geodesic(app, action, out);
    add_heat(app, action, out);
    add_poly(app, action, out);
    add_verify(app, action, out);
    add_simulate(app, action, out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return validation_error;
    }
    if (!action) {
        err << "error: no command\n";
        return validation_error;
    }
    try {
        action();
    } catch (const NumericalFailure& e) {
        err << "error: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return validation_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return numerical_failure;
    }
    return ok;
}

}  // namespace htype::cli
