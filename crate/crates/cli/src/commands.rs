use std::path::Path;
use std::sync::Arc;

use opkit::commutant::{commutant, star_closure};
use opkit::cpmaps::{choi_of, cp_witness, kraus_from_choi, stinespring, CPMap};
use opkit::gns::{gns_construct, is_pure, DensityJson, StarAlgebra, State};
use opkit::groups::{axb_haar_check, dft_cyclic, heisenberg_group, induce, AxbElement, Bump, FiniteGroup, Rectangle, SubgroupRep};
use opkit::linalg::eigvalsh;
use opkit::matrix::{inner, norm};
use opkit::spectral::spectral_decompose;
use opkit::stochastic::{covariance_check, exact_eigenvalue, kl_decompose, sample_paths};
use opkit::unbounded::{deficiency, momentum_operator, self_adjoint_extension};
use opkit::wavelet::{diagonal_plus_compact_report, haar_basis, mt_matrix, QSqrt2};
use opkit::{ComplexMatrix, Tolerance, C64};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::report::{Report, ReportBuilder};
use crate::{
    BrownianArgs, Cli, Command, CommutantArgs, CpCmd, CpVerifyArgs, Emit, ExtensionArgs, GnsArgs, GroupCmd, HaarCheckArgs,
    InduceArgs, SpectralCmd, WaveletCmd,
};

type CmdResult = Result<Report, String>;

/// Name recorded in the report for a parsed command.
pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectral(SpectralCmd::Decompose { .. }) => "spectral decompose",
        Command::Gns(_) => "gns",
        Command::Commutant(_) => "commutant",
        Command::Cp(CpCmd::Verify(_)) => "cp verify",
        Command::Group(GroupCmd::Induce(_)) => "group induce",
        Command::Group(GroupCmd::Dft { .. }) => "group dft",
        Command::Group(GroupCmd::HaarCheck(_)) => "group haar-check",
        Command::Extension(_) => "extension",
        Command::Brownian(_) => "brownian",
        Command::Wavelet(WaveletCmd::MtMatrix { .. }) => "wavelet mt-matrix",
    }
}

pub fn dispatch(cli: &Cli) -> CmdResult {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(format!("--tol must be a finite non-negative number, got {t}"));
        }
    }
    let mut b = ReportBuilder::new(command_name(&cli.command));
    let tol = |default: f64| cli.tol.unwrap_or(default);
    match &cli.command {
        Command::Spectral(SpectralCmd::Decompose { matrix }) => spectral(&mut b, matrix, tol(1e-8))?,
        Command::Gns(a) => gns(&mut b, a, tol(1e-9))?,
        Command::Commutant(a) => commutant_cmd(&mut b, a, tol(1e-8))?,
        Command::Cp(CpCmd::Verify(a)) => cp_verify(&mut b, a, tol(1e-9))?,
        Command::Group(GroupCmd::Induce(a)) => group_induce(&mut b, a, tol(1e-9))?,
        Command::Group(GroupCmd::Dft { input }) => group_dft(&mut b, input, tol(1e-10))?,
        Command::Group(GroupCmd::HaarCheck(a)) => haar_check(&mut b, a, tol(1e-6))?,
        Command::Extension(a) => extension(&mut b, a, tol(1e-3))?,
        Command::Brownian(a) => brownian(&mut b, a, cli.seed, tol(0.03))?,
        Command::Wavelet(WaveletCmd::MtMatrix { level }) => wavelet(&mut b, *level, tol(1e-9))?,
    }
    Ok(b.finish())
}

fn read_json<T: DeserializeOwned>(b: &mut ReportBuilder, name: &str, path: &Path) -> Result<T, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    b.input(name, &bytes);
    serde_json::from_slice(&bytes).map_err(|e| format!("invalid {name} JSON in {}: {e}", path.display()))
}

fn err(e: opkit::Error) -> String {
    e.to_string()
}

fn spectral(b: &mut ReportBuilder, path: &Path, tol: f64) -> Result<(), String> {
    let a: ComplexMatrix = read_json(b, "matrix", path)?;
    let s = spectral_decompose(&a, None).map_err(err)?;
    let scale = a.max_norm().max(1.0);
    b.result("eigenvalues", &s.eigenvalues)
        .result("multiplicities", &s.multiplicities)
        .result("projections", &s.projections)
        .check("reconstruction", s.reconstruct().max_dist(&a) / scale, tol)
        .check("pvm_axioms", s.validate(), tol);
    Ok(())
}

/// `{"density": matrix}` or a bare matrix.
#[derive(Deserialize)]
#[serde(untagged)]
enum DensityInput {
    Wrapped(DensityJson),
    Bare(ComplexMatrix),
}

fn gns(b: &mut ReportBuilder, a: &GnsArgs, tol: f64) -> Result<(), String> {
    let rho = match read_json::<DensityInput>(b, "density", &a.density)? {
        DensityInput::Wrapped(d) => d.density,
        DensityInput::Bare(m) => m,
    };
    let n = rho.ensure_square().map_err(err)?;
    let algebra = match &a.algebra {
        Some(p) => read_json::<StarAlgebra>(b, "algebra", p)?,
        None => StarAlgebra::full(n).map_err(err)?,
    };
    let state = State::new(algebra, rho, Tolerance::absolute(tol)).map_err(err)?;
    let t = gns_construct(&state).map_err(err)?;
    let purity = is_pure(&state).map_err(err)?;
    let cyclic = t.cyclic_rank().map_err(err)?;
    b.result("rep_dim", t.rep_dim)
        .result("omega", &t.omega)
        .result("pi", &t.pi)
        .result("pure", purity.pure)
        .result("commutant_dimension", purity.commutant_dimension)
        .check("omega_norm", (norm(&t.omega) - 1.0).abs(), tol)
        .check("state_identity", t.gns_identity_residual(&state), tol)
        .check("representation", t.representation_residual().map_err(err)?, tol)
        .check("cyclicity_rank_defect", t.rep_dim.abs_diff(cyclic) as f64, 0.0);
    Ok(())
}

fn commutant_cmd(b: &mut ReportBuilder, a: &CommutantArgs, tol: f64) -> Result<(), String> {
    let mut gens: Vec<ComplexMatrix> = read_json(b, "generators", &a.generators)?;
    b.param("star", a.star);
    if a.star {
        gens = star_closure(&gens);
    }
    let r = commutant(&gens).map_err(err)?;
    let mut comm_res: f64 = 0.0;
    let mut ortho_res: f64 = 0.0;
    for (i, c) in r.basis.iter().enumerate() {
        for g in &gens {
            comm_res = comm_res.max(c.commutator(g).map_err(err)?.max_norm() / g.max_norm().max(1.0));
        }
        for (j, d) in r.basis.iter().enumerate() {
            let hs = inner(&c.vec(), &d.vec());
            let want = if i == j { 1.0 } else { 0.0 };
            ortho_res = ortho_res.max((hs - C64::new(want, 0.0)).norm());
        }
    }
    b.result("dimension", r.dimension)
        .result("is_abelian", r.is_abelian)
        .result("matrix_block_size", r.matrix_block_size)
        .result("basis", &r.basis)
        .check("commutes_with_generators", comm_res, tol)
        .check("basis_orthonormal", ortho_res, tol);
    Ok(())
}

fn cp_verify(b: &mut ReportBuilder, a: &CpVerifyArgs, tol: f64) -> Result<(), String> {
    let map = if let Some(p) = &a.source.choi {
        let c: ComplexMatrix = read_json(b, "choi", p)?;
        let size = c.ensure_square().map_err(err)?;
        let n = match a.in_dim {
            Some(n) => n,
            None => {
                let r = (size as f64).sqrt().round() as usize;
                if r * r != size {
                    return Err(format!("Choi matrix of size {size} is not square-dimensional; pass --in-dim"));
                }
                r
            }
        };
        b.param("in_dim", n);
        CPMap::from_choi(c, n).map_err(err)?
    } else {
        let p = a.source.map.as_ref().expect("clap enforces one source");
        read_json::<CPMap>(b, "map", p)?
    };
    let t = Tolerance::absolute(tol);
    let choi = choi_of(&map);
    let herm = choi.hermitian_residual().map_err(err)?;
    let min_eig = eigvalsh(&choi.real_part()).map_err(err)?[0];
    b.result("in_dim", map.in_dim())
        .result("out_dim", map.out_dim())
        .result("min_choi_eigenvalue", min_eig)
        .result("unital_residual", map.unital_residual())
        .check("choi_hermitian", herm, tol)
        .check("completely_positive", (-min_eig).max(0.0), tol);
    if min_eig >= -tol && herm <= tol {
        let kraus = kraus_from_choi(&choi, map.in_dim(), t).map_err(err)?;
        let back = CPMap::from_kraus(kraus.clone()).map_err(err)?;
        b.result("kraus_rank", kraus.len()).result("kraus", &kraus).check(
            "kraus_round_trip",
            back.distance(&map).map_err(err)?,
            tol.max(1e-8),
        );
        if let Ok(d) = stinespring(&map, t) {
            b.result("stinespring_rank", d.rank).check("stinespring_isometry", d.isometry_residual(), tol.max(1e-8));
        }
    } else if let Some(w) = cp_witness(&map, t).map_err(err)? {
        b.result("witness", &w);
    }
    Ok(())
}

fn group_induce(b: &mut ReportBuilder, a: &InduceArgs, tol: f64) -> Result<(), String> {
    let group = match (&a.group, a.cyclic, a.heisenberg) {
        (Some(p), None, None) => read_json::<FiniteGroup>(b, "group", p)?,
        (None, Some(n), None) => {
            b.param("cyclic", n);
            FiniteGroup::cyclic(n).map_err(err)?
        }
        (None, None, Some(p)) => {
            b.param("heisenberg", p);
            heisenberg_group(p).map_err(err)?
        }
        _ => return Err("exactly one of --group, --cyclic, --heisenberg is required".into()),
    };
    let sub: SubgroupRep = read_json(b, "subgroup", &a.subgroup)?;
    let ind = induce(Arc::new(group), &sub, Tolerance::absolute(tol)).map_err(err)?;
    let comm = commutant(&ind.rep.matrices).map_err(err)?;
    b.result("dim", ind.rep.dim)
        .result("index", ind.index())
        .result("representatives", &ind.representatives)
        .result("character", ind.rep.character())
        .result("matrices", &ind.rep.matrices)
        .result("commutant_dimension", comm.dimension)
        .result("irreducible", comm.dimension == 1)
        .check("homomorphism", ind.rep.homomorphism_residual(), tol)
        .check("covariance", ind.covariance_residual(), tol);
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

fn group_dft(b: &mut ReportBuilder, path: &Path, tol: f64) -> Result<(), String> {
    let entries: Vec<Entry> = read_json(b, "input", path)?;
    if entries.is_empty() {
        return Err("DFT input must be non-empty".into());
    }
    let f: Vec<C64> = entries
        .iter()
        .map(|e| match *e {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Pair([re, im]) => C64::new(re, im),
        })
        .collect();
    let out = dft_cyclic(&f);
    // Applying the unitary DFT to its conjugate output returns the conjugate input.
    let conj: Vec<C64> = out.iter().map(|z| z.conj()).collect();
    let back = dft_cyclic(&conj);
    let n = f.len();
    let inv_res = (0..n).map(|k| (back[k].conj() - f[k]).norm()).fold(0.0, f64::max);
    let scale = norm(&f).max(1.0);
    b.result("output", out.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
        .check("unitarity", (norm(&out) - norm(&f)).abs() / scale, tol)
        .check("inversion", inv_res / scale, tol);
    Ok(())
}

fn haar_check(b: &mut ReportBuilder, a: &HaarCheckArgs, tol: f64) -> Result<(), String> {
    b.param("a", a.a).param("b", a.b).param("grid", a.grid);
    let h = AxbElement::new(a.a, a.b).map_err(err)?;
    let f = Bump { center: (1.0, 0.0), radius: (0.5, 0.5) };
    // Bounding box of supp f, h·supp f and supp f·h, padded by a tenth.
    let corners = [(0.5, -0.5), (0.5, 0.5), (1.5, -0.5), (1.5, 0.5)].map(|(x, y)| AxbElement { a: x, b: y });
    let pts: Vec<AxbElement> = corners.iter().flat_map(|&c| [c, h.mul(c), c.mul(h)]).collect();
    let (a0, a1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.a), hi.max(p.a)));
    let (b0, b1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.b), hi.max(p.b)));
    let (pa, pb) = ((a1 - a0) / 10.0, (b1 - b0) / 10.0);
    let rect = Rectangle { a_min: a0 - pa.min(a0 / 2.0), a_max: a1 + pa, b_min: b0 - pb, b_max: b1 + pb, n: a.grid };
    let r = axb_haar_check(&f, h, &rect).map_err(err)?;
    let scale = r.left_integral.abs().max(r.right_integral.abs()).max(1e-300);
    b.result("bump", f)
        .result("rectangle", rect)
        .result("report", &r)
        .check("left_invariance", r.left_residual / scale, tol)
        .check("right_invariance", r.right_residual / scale, tol)
        .check("modular_relation", r.modular_residual / scale, tol);
    Ok(())
}

fn extension(b: &mut ReportBuilder, a: &ExtensionArgs, tol: f64) -> Result<(), String> {
    let dgrid = a.deficiency_grid.unwrap_or(a.grid.min(256));
    b.param("grid", a.grid).param("theta", a.theta).param("deficiency_grid", dgrid);
    let d = deficiency(&momentum_operator(dgrid).map_err(err)?).map_err(err)?;
    let ext = self_adjoint_extension(&momentum_operator(a.grid).map_err(err)?, &d, a.theta).map_err(err)?;
    b.result("d_plus", d.d_plus)
        .result("d_minus", d.d_minus)
        .result("gap_plus", d.gap_plus)
        .result("gap_minus", d.gap_minus)
        .result("eigenvalues", &ext.eigenvalues)
        .result("nearest_to_theta", ext.nearest(a.theta))
        .check("hermitian", ext.hermitian_residual, 1e-9)
        .check("eigenvalue_formula", ext.formula_error(3), tol);
    Ok(())
}

fn brownian(b: &mut ReportBuilder, a: &BrownianArgs, seed: u64, tol: f64) -> Result<(), String> {
    b.param("grid", a.grid).param("modes", a.modes).param("paths", a.paths).param("seed", seed);
    let basis = kl_decompose(a.grid, a.modes).map_err(err)?;
    let ens = sample_paths(&basis, a.paths, seed).map_err(err)?;
    let cov = covariance_check(&ens).map_err(err)?;
    let lam1 = (basis.eigenvalues[0] - exact_eigenvalue(1)).abs() / exact_eigenvalue(1);
    b.result("eigenvalues", &basis.eigenvalues)
        .result("truncation_error", basis.truncation_error())
        .result("covariance", &cov)
        .check("covariance_deviation", cov.max_covariance_deviation, tol)
        .check("lambda1_relative_error", lam1, 1e-3);
    if a.emit == Emit::Paths {
        b.result("grid", &ens.grid).result("paths", &ens.paths);
    }
    Ok(())
}

fn wavelet(b: &mut ReportBuilder, level: u32, tol: f64) -> Result<(), String> {
    b.param("level", level);
    let basis = haar_basis(level).map_err(err)?;
    let m = mt_matrix(&basis);
    let report = diagonal_plus_compact_report(&m);
    // Multiplication by t compressed to the span of the basis has the cell midpoints as spectrum.
    let cells = 1usize << (level + 1);
    let mut want: Vec<f64> = (0..cells).map(|k| (k as f64 + 0.5) / cells as f64).collect();
    want.sort_by(f64::total_cmp);
    let got = eigvalsh(&m.to_matrix()).map_err(err)?;
    let spec_res = got.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let phi0 = m.entries[0][0] - QSqrt2::frac(1, 2);
    b.result("basis", &basis.functions)
        .result("matrix", &m.entries)
        .result("irrational_entries", m.irrational_entries().len())
        .result("decay", &report)
        .check("symmetric", if m.is_symmetric() { 0.0 } else { 1.0 }, 0.0)
        .check("phi0_entry_exact", phi0.abs().to_f64(), 0.0)
        .check("spectrum_is_cell_midpoints", spec_res, tol);
    Ok(())
}

/// Report for a command whose inputs failed validation: one failing check.
pub fn invalid_input_report(cli: &Cli, msg: &str) -> Report {
    let mut b = ReportBuilder::new(command_name(&cli.command));
    b.result("error", msg).check("valid_input", 1.0, 0.0);
    b.finish()
}
