#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>
#include <sstream>

#include "bihamo/cohomology.hpp"
#include "bihamo/functionals.hpp"
#include "bihamo/pencilfile.hpp"
#include "bihamo/report.hpp"

namespace bihamo {

namespace {

using Op = OperatorId<CoeffFn>;

std::string mode_name(PencilMode m) {
    return m == PencilMode::Formal ? "formal" : "concrete";
}

int cmd_validate(const PencilFile& pf, ReportFormat fmt, std::ostream& out) {
    Report rep("validate");
    rep.scalar("N", (long long)pf.N);
    rep.scalar("mode", mode_name(pf.mode));
    FerapontovReport fr = pf.mode == PencilMode::Formal
                              ? validate_ferapontov(pf.formal())
                              : validate_ferapontov(pf.concrete());
    rep.scalar("pass", fr.pass);
    rep.columns({"equation", "i", "j", "k", "ok", "residual"});
    for (const auto& e : fr.entries)
        rep.add_row({e.equation, std::to_string(e.i), std::to_string(e.j), std::to_string(e.k),
                     e.ok ? "true" : "false", e.residual});
    rep.emit(out, fmt);
    return fr.pass ? 0 : 1;
}

template <class P>
bool nilpotency_rows(const P& pencil, int p, int d, Report& rep) {
    using E = ElementT<typename P::Ring>;
    auto dl = d_lambda(pencil);
    bool all = true;
    for (const auto& m : slice_basis(p, d, pencil.coord_count())) {
        E sq = dl(dl(E::monomial(m, pencil.one())));
        bool ok = sq.is_zero();
        all = all && ok;
        rep.add_row({m.str(), ok ? "zero" : "nonzero"});
    }
    return all;
}

int cmd_nilpotency(const PencilFile& pf, int p, int d, bool formal, ReportFormat fmt,
                   std::ostream& out) {
    Report rep("nilpotency");
    rep.scalar("N", (long long)pf.N);
    rep.scalar("p", (long long)p);
    rep.scalar("d", (long long)d);
    bool use_formal = formal || pf.mode == PencilMode::Formal;
    rep.scalar("ring", use_formal ? "formal" : "concrete");
    rep.columns({"monomial", "square"});
    bool all = use_formal ? nilpotency_rows(FormalPencil(pf.N), p, d, rep)
                          : nilpotency_rows(pf.concrete(), p, d, rep);
    rep.scalar("pass", all);
    rep.emit(out, fmt);
    return all ? 0 : 1;
}

int cmd_cohomology(const PencilFile& pf, const std::string& space_name,
                   const std::string& diff_name, int p, int d, int K, int L, int ci,
                   ReportFormat fmt, std::ostream& out, std::ostream& err) {
    if (pf.mode == PencilMode::Formal) {
        err << "cohomology windows need a concrete pencil\n";
        return 2;
    }
    PencilData pd = pf.concrete();

    std::string diff = diff_name;
    SliceSpace space;
    if (space_name == "A") {
        space = SliceSpace::AFull;
    } else if (space_name == "C") {
        space = SliceSpace::CHat;
    } else if (space_name == "dCi") {
        space = SliceSpace::DCi;
        if (diff.empty()) diff = "di";
    } else {
        space = SliceSpace::FHat;
    }
    if (diff.empty()) diff = "d_lambda";

    Op op = Op::d_lambda();
    int dp = 1, dd = 1;
    if (diff == "d_lambda") {
        op = Op::d_lambda();
    } else if (diff == "delta_minus1") {
        op = Op::delta_minus1();
    } else if (diff == "delta0") {
        op = Op::delta0_appendix();
    } else if (diff == "dhat") {
        op = Op::dhat(ci);
    } else if (diff == "di") {
        op = Op::di(ci);
    } else if (diff == "euler") {
        op = Op::euler(ci);
        dp = dd = 0;
    } else {
        err << "unknown differential " << diff << "\n";
        return 2;
    }

    if (space == SliceSpace::FHat && diff != "d_lambda") {
        err << "functional slices support only the pencil differential\n";
        return 2;
    }

    CohomologyReport r;
    try {
        if (space == SliceSpace::FHat) {
            r = bh_slice(pd, p, d, K, L);
        } else {
            long g = 0;
            for (int i = 1; i <= pd.coord_count(); ++i) {
                if (!pd.f(i).is_polynomial())
                    throw UnsupportedCoefficient("window sizing needs polynomial metric entries");
                g = std::max(g, pd.f(i).num().total_degree());
            }
            SliceSpec at{p, d, K, L, space, ci, op};
            SliceSpec in{p - dp, d - dd, K - (int)g - 1, L - 1, space, ci, op};
            r = cohomology_dim(at, in, pd);
        }
    } catch (const std::invalid_argument& e) {
        // windows are chained by construction, so the only way here is data
        // on which the chosen operator is not a differential
        err << e.what() << "\n";
        return 1;
    }

    Report rep("cohomology");
    rep.scalar("N", (long long)pf.N);
    rep.scalar("space", space_name);
    rep.scalar("diff", diff);
    rep.scalar("p", (long long)p);
    rep.scalar("d", (long long)d);
    rep.scalar("K", (long long)K);
    rep.scalar("L", (long long)L);
    rep.scalar("fdeg", (long long)r.fdeg);
    rep.scalar("dim", (long long)r.interior.back());
    rep.scalar("stabilized", r.stabilized);
    rep.scalar("interior_limit", (long long)r.interior_limit);
    {
        std::string prof;
        for (size_t k = 0; k < r.interior.size(); ++k)
            prof += (k ? " " : "") + std::to_string(r.interior[k]);
        rep.scalar("interior", prof);
    }
    rep.columns({"k", "l", "dim_space", "dim_ker", "dim_im", "dim_h", "boundary"});
    for (const auto& row : r.rows)
        rep.add_row({std::to_string(row.K), std::to_string(row.L), std::to_string(row.dim_space),
                     std::to_string(row.dim_ker), std::to_string(row.dim_im),
                     std::to_string(row.dim_h), row.boundary ? "true" : "false"});
    rep.emit(out, fmt);
    return 0;
}

int emit_central_invariants(const std::string& command, const PencilData& pd,
                            const DeformationCoeffs& A, ReportFormat fmt, std::ostream& out) {
    CentralInvariants ci = central_invariants(pd, A);
    Report rep(command);
    for (size_t i = 0; i < ci.c.size(); ++i)
        rep.scalar("c" + std::to_string(i + 1), ci.c[i].str());
    rep.scalar("single_variable", ci.all_single_variable());
    rep.columns({"violation_i", "violation_j"});
    for (const auto& [i, j] : ci.violations)
        rep.add_row({std::to_string(i), std::to_string(j)});
    rep.emit(out, fmt);
    return ci.all_single_variable() ? 0 : 1;
}

int cmd_central_invariants(const PencilFile& pf, ReportFormat fmt, std::ostream& out,
                           std::ostream& err) {
    if (pf.mode == PencilMode::Formal) {
        err << "central invariants need a concrete pencil\n";
        return 2;
    }
    return emit_central_invariants("central-invariants", pf.concrete(), pf.deformation_coeffs(),
                                   fmt, out);
}

int cmd_kdv_demo(ReportFormat fmt, std::ostream& out) {
    CoeffCtx cx{1};
    PencilData pd(1, {cx.one()});
    DeformationCoeffs A(1);
    A.set(2, 3, 2, 1, 1, cx.rat(rat(1, 8)));
    return emit_central_invariants("kdv-demo", pd, A, fmt, out);
}

int cmd_basis(int p, int d, int N, ReportFormat fmt, std::ostream& out) {
    Report rep("basis");
    rep.columns({"monomial"});
    for (const auto& m : slice_basis(p, d, N)) rep.add_row({m.str()});
    rep.emit(out, fmt);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact theta-formalism computations for semisimple bi-Hamiltonian pencils"};
    app.require_subcommand(1);

    std::string fmt_name = "tsv";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", fmt_name, "output format")
            ->check(CLI::IsMember({"tsv", "structured"}));
    };

    std::string vfile;
    CLI::App* validate = app.add_subcommand("validate", "check the flatness equations");
    validate->add_option("file", vfile, "pencil file")->required();
    add_format(validate);

    std::string nfile;
    int np = 0, nd = 0;
    bool nformal = false;
    CLI::App* nil = app.add_subcommand("nilpotency", "square the pencil differential on a slice");
    nil->add_option("file", nfile, "pencil file")->required();
    nil->add_option("--p", np, "theta-degree")->required()->check(CLI::Range(0, 64));
    nil->add_option("--d", nd, "standard degree")->required()->check(CLI::Range(0, 64));
    nil->add_flag("--formal", nformal, "work in the rotation-coefficient rewrite ring");
    add_format(nil);

    std::string cfile, cspace, cdiff;
    int cp = 0, cd = 0, cK = 0, cL = 0, cidx = 1;
    CLI::App* coh = app.add_subcommand("cohomology", "dimension scan of a truncated window");
    coh->add_option("file", cfile, "pencil file")->required();
    coh->add_option("--space", cspace, "slice model")
        ->required()
        ->check(CLI::IsMember({"A", "F", "C", "dCi"}));
    coh->add_option("--p", cp, "theta-degree")->required()->check(CLI::Range(0, 64));
    coh->add_option("--d", cd, "standard degree")->required()->check(CLI::Range(0, 64));
    coh->add_option("--K", cK, "u-degree budget")->required()->check(CLI::Range(0, 64));
    coh->add_option("--L", cL, "lambda-degree budget")->required()->check(CLI::Range(0, 64));
    coh->add_option("--diff", cdiff, "differential (default d_lambda; di for dCi)");
    coh->add_option("--i", cidx, "carrier index for dCi and indexed differentials")
        ->check(CLI::Range(1, 64));
    add_format(coh);

    std::string ifile;
    CLI::App* cinv = app.add_subcommand("central-invariants",
                                        "central invariants of a deformation");
    cinv->add_option("file", ifile, "pencil file with deformation entries")->required();
    add_format(cinv);

    int bp = 0, bd = 0, bN = 0;
    CLI::App* basis = app.add_subcommand("basis", "list the slice basis monomials");
    basis->add_option("--p", bp, "theta-degree")->required()->check(CLI::Range(0, 64));
    basis->add_option("--d", bd, "standard degree")->required()->check(CLI::Range(0, 64));
    basis->add_option("--N", bN, "coordinate count")->required()->check(CLI::Range(1, 16));
    add_format(basis);

    CLI::App* kdv = app.add_subcommand("kdv-demo", "central invariant of the KdV deformation");
    add_format(kdv);

    std::vector<std::string> argv_s;
    argv_s.push_back("bihamo");
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(argv_s.size());
    for (auto& s : argv_s) argv.push_back(s.data());

    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        ReportFormat fmt = parse_report_format(fmt_name);
        if (app.got_subcommand(validate)) return cmd_validate(load_pencil_file(vfile), fmt, out);
        if (app.got_subcommand(nil))
            return cmd_nilpotency(load_pencil_file(nfile), np, nd, nformal, fmt, out);
        if (app.got_subcommand(coh))
            return cmd_cohomology(load_pencil_file(cfile), cspace, cdiff, cp, cd, cK, cL, cidx,
                                  fmt, out, err);
        if (app.got_subcommand(cinv))
            return cmd_central_invariants(load_pencil_file(ifile), fmt, out, err);
        if (app.got_subcommand(basis)) return cmd_basis(bp, bd, bN, fmt, out);
        if (app.got_subcommand(kdv)) return cmd_kdv_demo(fmt, out);
    } catch (const WitnessMismatch& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
    err << "no command\n";
    return 2;
}

}  // namespace bihamo
