//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use exoland::kms::{
    self, displacement, hs_inner, kms_resolution_check, wigner, wigner_isometry_inner, HSMatrix,
    KmsHusimi, PlanarGrid, ThermalStateVector,
};
use exoland::magnetics::{
    derivative_chain_residuals, free_energy, magnetization, partition_consistency,
    susceptibility, susceptibility_high_t, MagnetContext,
};
use exoland::model::{derive_with_eps, enumerate_levels};
use exoland::phase_dist::{
    ensemble, husimi_mode, p_mode, wehrl_closed, wehrl_mode_closed, wehrl_numeric, ChiralMode,
    PhaseQuadrature,
};

use crate::config::RunConfig;
use crate::{CliError, Format};

type C64 = Complex<f64>;

pub struct CommandIo<'a> {
    pub out: Option<&'a Path>,
    pub format: Format,
    pub seed: u64,
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

/// Emit rows either as a CSV body with the given header or as a JSON array.
fn render_rows<R: Serialize>(header: &str, csv_rows: &[String], rows: &[R], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut text = String::with_capacity(csv_rows.len() * 32 + header.len() + 2);
            text.push_str(header);
            text.push('\n');
            for row in csv_rows {
                text.push_str(row);
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let mut text = serde_json::to_string(rows).expect("serializable rows");
            text.push('\n');
            text
        }
    }
}

fn emit(io: &CommandIo, text: &str) -> Result<(), CliError> {
    match io.out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct LevelRow {
    n_plus: usize,
    n_minus: usize,
    energy: f64,
}

pub fn cmd_spectrum(config: &RunConfig, io: &CommandIo) -> Result<(), CliError> {
    let derived = derive_with_eps(&config.params, config.eps_crit)?;
    let levels = enumerate_levels(&derived, &config.params, config.e_max)?;
    let rows: Vec<LevelRow> = levels
        .iter()
        .map(|&(n_plus, n_minus, energy)| LevelRow {
            n_plus,
            n_minus,
            energy,
        })
        .collect();
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{},{:e}", r.n_plus, r.n_minus, r.energy))
        .collect();
    emit(
        io,
        &render_rows("n_plus,n_minus,energy", &csv_rows, &rows, io.format),
    )
}

// ----------------------------------------------------------- distributions

#[derive(Serialize)]
struct GridRow {
    mode: &'static str,
    re_z: f64,
    im_z: f64,
    value: f64,
}

fn distribution_grid(
    quad: &PhaseQuadrature<f64>,
    scale_of: impl Fn(ChiralMode) -> f64,
    value_of: impl Fn(ChiralMode, f64) -> f64,
) -> Vec<GridRow> {
    let mut rows = Vec::new();
    for (mode, label) in [(ChiralMode::Plus, "plus"), (ChiralMode::Minus, "minus")] {
        let scale = scale_of(mode);
        for i in 0..quad.radial_order() {
            let u = quad.radial_node(i) / scale;
            let r = u.sqrt();
            for k in 0..quad.angular_order() {
                let phi = std::f64::consts::TAU * (k as f64 + 0.5) / quad.angular_order() as f64;
                rows.push(GridRow {
                    mode: label,
                    re_z: r * phi.cos(),
                    im_z: r * phi.sin(),
                    value: value_of(mode, u),
                });
            }
        }
    }
    rows
}

pub fn cmd_distributions(config: &RunConfig, io: &CommandIo) -> Result<(), CliError> {
    let derived = derive_with_eps(&config.params, config.eps_crit)?;
    let ens = ensemble(&derived, &config.params)?;
    let quad = PhaseQuadrature::new(config.n_r, config.n_theta)?;

    // All numerics run before any file is opened, so a guarded regime leaves
    // no partial outputs behind.
    let mut q_norm = 1.0;
    let mut p_norm = 1.0;
    for mode in [ChiralMode::Plus, ChiralMode::Minus] {
        // Trip the delta-limit guard up front (closures below cannot return it).
        p_mode(&ens, mode, 0.0)?;
        let s = ens.width_exp(mode);
        q_norm *= quad.integrate_radial(s, |u| husimi_mode(&ens, mode, u));
        let nbar = ens.occupancy(mode);
        p_norm *=
            quad.integrate_radial(nbar.recip(), |u| p_mode(&ens, mode, u).unwrap_or(f64::NAN));
    }

    // Pointwise agreement of the two Husimi width forms at seeded points.
    let mut rng = ChaCha8Rng::seed_from_u64(io.seed);
    let mut forms_dev = 0.0f64;
    for _ in 0..100 {
        let mode = if rng.gen_bool(0.5) { ChiralMode::Plus } else { ChiralMode::Minus };
        let u: f64 = rng.gen_range(0.0..9.0);
        let s_occ = ens.width_occ(mode);
        let occ_form = s_occ * (-s_occ * u).exp();
        forms_dev = forms_dev.max((husimi_mode(&ens, mode, u) - occ_form).abs());
    }

    let q_rows = distribution_grid(
        &quad,
        |mode| ens.width_exp(mode),
        |mode, u| husimi_mode(&ens, mode, u),
    );
    let p_rows = distribution_grid(
        &quad,
        |mode| ens.occupancy(mode).recip(),
        |mode, u| p_mode(&ens, mode, u).expect("guard checked above"),
    );

    let prefix = io
        .out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("distributions"));
    let ext = match io.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let q_path = prefix.with_file_name(format!(
        "{}_q.{ext}",
        prefix.file_name().and_then(|s| s.to_str()).unwrap_or("distributions")
    ));
    let p_path = prefix.with_file_name(format!(
        "{}_p.{ext}",
        prefix.file_name().and_then(|s| s.to_str()).unwrap_or("distributions")
    ));
    let header = "mode,re_z,im_z,value";
    let to_csv = |rows: &[GridRow]| -> Vec<String> {
        rows.iter()
            .map(|r| format!("{},{:e},{:e},{:e}", r.mode, r.re_z, r.im_z, r.value))
            .collect()
    };
    write_text(&q_path, &render_rows(header, &to_csv(&q_rows), &q_rows, io.format))?;
    write_text(&p_path, &render_rows(header, &to_csv(&p_rows), &p_rows, io.format))?;

    println!("q_norm={q_norm:e} p_norm={p_norm:e}");
    println!("husimi_forms_max_dev={forms_dev:e}");
    println!("q_grid={} p_grid={}", q_path.display(), p_path.display());

    let q_dev = (q_norm - 1.0).abs();
    let p_dev = (p_norm - 1.0).abs();
    if q_dev > config.norm_tol || p_dev > config.norm_tol {
        return Err(CliError::numerical(format!(
            "normalization breach: |q_norm-1|={q_dev:e}, |p_norm-1|={p_dev:e} (tol {:e})",
            config.norm_tol
        )));
    }
    Ok(())
}

// ------------------------------------------------------------------- wehrl

pub fn cmd_wehrl(config: &RunConfig, io: &CommandIo) -> Result<(), CliError> {
    let derived = derive_with_eps(&config.params, config.eps_crit)?;
    let ens = ensemble(&derived, &config.params)?;
    let quad = PhaseQuadrature::new(config.n_r, config.n_theta)?;
    let closed = wehrl_closed(&ens);
    let numeric = wehrl_numeric(&ens, &quad)?;
    let diff = (closed - numeric).abs();
    let plus = wehrl_mode_closed(&ens, ChiralMode::Plus);
    let minus = wehrl_mode_closed(&ens, ChiralMode::Minus);

    let mut report = String::new();
    let _ = writeln!(report, "wehrl_mode_plus={plus:e}");
    let _ = writeln!(report, "wehrl_mode_minus={minus:e}");
    let _ = writeln!(report, "wehrl_closed={closed:e}");
    let _ = writeln!(report, "wehrl_numeric={numeric:e}");
    let _ = writeln!(report, "abs_diff={diff:e}");
    match io.format {
        Format::Csv => {
            let text = format!(
                "quantity,value\nwehrl_mode_plus,{plus:e}\nwehrl_mode_minus,{minus:e}\nwehrl_closed,{closed:e}\nwehrl_numeric,{numeric:e}\nabs_diff,{diff:e}\n"
            );
            emit(io, &text)?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct WehrlOut {
                wehrl_mode_plus: f64,
                wehrl_mode_minus: f64,
                wehrl_closed: f64,
                wehrl_numeric: f64,
                abs_diff: f64,
            }
            let mut text = serde_json::to_string(&WehrlOut {
                wehrl_mode_plus: plus,
                wehrl_mode_minus: minus,
                wehrl_closed: closed,
                wehrl_numeric: numeric,
                abs_diff: diff,
            })
            .expect("serializable");
            text.push('\n');
            emit(io, &text)?;
        }
    }
    if io.out.is_some() {
        print!("{report}");
    }
    if diff > config.wehrl_tol {
        return Err(CliError::numerical(format!(
            "wehrl mismatch {diff:e} exceeds {:e}",
            config.wehrl_tol
        )));
    }
    Ok(())
}

// ------------------------------------------------------------ magnet-sweep

#[derive(Serialize)]
struct SweepRow {
    kappa: f64,
    #[serde(rename = "B")]
    field: f64,
    beta: f64,
    #[serde(rename = "F")]
    free_energy: f64,
    #[serde(rename = "M")]
    magnetization: f64,
    chi: f64,
    #[serde(rename = "chi_highT")]
    chi_high_t: f64,
    sign: i8,
    resid_m: f64,
    resid_chi: f64,
    partition_gap: f64,
}

pub fn cmd_magnet_sweep(config: &RunConfig, io: &CommandIo) -> Result<(), CliError> {
    // κ is swept at fixed B by varying θ = −κ/(eB); κ = 0 is then the plain
    // Landau row rather than the singular B = 0 point.
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(config.params.field > 0.0) {
        return Err(CliError::input(
            "magnet-sweep requires field > 0 (κ is realized as θ = −κ/(eB))".into(),
        ));
    }
    if !(config.kappa_min > -1.0 && config.kappa_max <= 0.0 && config.kappa_min <= config.kappa_max)
    {
        return Err(CliError::input(format!(
            "kappa grid [{}, {}] must lie in (-1, 0]",
            config.kappa_min, config.kappa_max
        )));
    }
    let n = config.kappa_points;
    let mut rows = Vec::with_capacity(n);
    let mut worst_residual = 0.0f64;
    for i in 0..n {
        let kappa = if n == 1 {
            config.kappa_min
        } else {
            // Ratio first so the endpoints land exactly on the bounds.
            let ratio = i as f64 / (n - 1) as f64;
            config.kappa_min + (config.kappa_max - config.kappa_min) * ratio
        };
        let mut params = config.params;
        params.theta = (-kappa / (params.charge * params.field)).max(0.0);
        let ctx = if config.thermal_wavelength_beta {
            MagnetContext::new_with_beta_wavelength(params, config.volume, config.particles)?
        } else {
            MagnetContext::new(params, config.volume, config.particles)?
        };
        let f = free_energy(&ctx)?;
        let m = magnetization(&ctx)?;
        let chi = susceptibility(&ctx)?;
        let chi_high_t = susceptibility_high_t(kappa, params.beta, &params);
        let (resid_m, resid_chi) = derivative_chain_residuals(&ctx)?;
        worst_residual = worst_residual.max(resid_m).max(resid_chi);
        rows.push(SweepRow {
            kappa,
            field: params.field,
            beta: params.beta,
            free_energy: f,
            magnetization: m,
            chi,
            chi_high_t,
            sign: if chi_high_t > 0.0 { 1 } else { -1 },
            resid_m,
            resid_chi,
            partition_gap: partition_consistency(&ctx)?,
        });
    }
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{:e},{:e},{:e}",
                r.kappa,
                r.field,
                r.beta,
                r.free_energy,
                r.magnetization,
                r.chi,
                r.chi_high_t,
                r.sign,
                r.resid_m,
                r.resid_chi,
                r.partition_gap
            )
        })
        .collect();
    emit(
        io,
        &render_rows(
            "kappa,B,beta,F,M,chi,chi_highT,sign,resid_m,resid_chi,partition_gap",
            &csv_rows,
            &rows,
            io.format,
        ),
    )?;
    if worst_residual > config.residual_tol {
        return Err(CliError::numerical(format!(
            "derivative-chain residual {worst_residual:e} exceeds {:e}",
            config.residual_tol
        )));
    }
    Ok(())
}

// --------------------------------------------------------------- kms-check

fn husimi_grid_csv(
    husimi: &KmsHusimi<'_, f64>,
    grid: &PlanarGrid<f64>,
) -> (Vec<String>, Vec<serde_json::Value>) {
    let mut csv = Vec::new();
    let mut json = Vec::new();
    for z in grid.nodes() {
        let (x, y) = PlanarGrid::xy(z);
        let q = husimi.eval(z);
        csv.push(format!("{x:e},{y:e},{q:e}"));
        json.push(serde_json::json!({"x": x, "y": y, "q": q}));
    }
    (csv, json)
}

fn wigner_grid_csv(
    op: &HSMatrix<f64>,
    grid: &PlanarGrid<f64>,
) -> (Vec<String>, Vec<serde_json::Value>) {
    let mut csv = Vec::new();
    let mut json = Vec::new();
    for z in grid.nodes() {
        let (x, y) = PlanarGrid::xy(z);
        let w = wigner(op, x, y);
        csv.push(format!("{x:e},{y:e},{:e},{:e}", w.re, w.im));
        json.push(serde_json::json!({"x": x, "y": y, "re": w.re, "im": w.im}));
    }
    (csv, json)
}

pub fn cmd_kms_check(config: &RunConfig, io: &CommandIo) -> Result<(), CliError> {
    let ts: ThermalStateVector<f64> = kms::thermal_state(
        config.params.beta * config.params.hbar,
        config.kms_omega,
        config.cutoff,
    )?;
    let grid = PlanarGrid::new(config.kms_radius, config.kms_grid)?;
    let dim = ts.dim();
    let block = (dim / 4).max(1);

    // Displacement unitarity on the inner block at a reference |z|² = 1.
    let d_ref = displacement(C64::new(0.6, 0.8), dim)?;
    let gram = d_ref.adjoint().matmul(&d_ref)?;
    let mut unitarity_dev = 0.0f64;
    for m in 0..block {
        for n in 0..block {
            let expected = if m == n { 1.0 } else { 0.0 };
            unitarity_dev = unitarity_dev.max((gram.get(m, n) - C64::new(expected, 0.0)).norm());
        }
    }

    // Wigner isometry on seeded operators supported on the inner block.
    let mut rng = ChaCha8Rng::seed_from_u64(io.seed);
    let iso_grid = PlanarGrid::new(8.0, 128)?;
    let mut isometry_dev = 0.0f64;
    for _ in 0..5 {
        let x = HSMatrix::from_fn(block, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let y = HSMatrix::from_fn(block, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let lhs = wigner_isometry_inner(&x, &y, &iso_grid)?;
        let rhs = hs_inner(&x, &y)?;
        isometry_dev = isometry_dev.max((lhs - rhs).norm() / rhs.norm());
    }

    let resolution_dev = kms_resolution_check(&ts, &grid)?;

    let rho = ts.density();
    let husimi = KmsHusimi::new(&ts, &rho, config.rho_action)?;
    let husimi_norm = husimi.normalization(&grid)?;
    let mut husimi_min = f64::INFINITY;
    for _ in 0..100 {
        let z = C64::new(
            rng.gen_range(-config.kms_radius / 2.0..config.kms_radius / 2.0),
            rng.gen_range(-config.kms_radius / 2.0..config.kms_radius / 2.0),
        );
        husimi_min = husimi_min.min(husimi.eval(z));
    }

    let coverage = (-config.kms_radius * config.kms_radius / 4.0).exp();
    println!("thermal_tail={:e}", ts.tail_bound());
    println!("coverage_bound={coverage:e}");
    println!("displacement_budget=|z|^2<={:e}", dim as f64 / 4.0);
    println!("displacement_unitarity={unitarity_dev:e}");
    println!("wigner_isometry={isometry_dev:e}");
    println!("resolution_deviation={resolution_dev:e}");
    println!("husimi_norm={husimi_norm:e}");
    println!("husimi_min={husimi_min:e}");

    if let Some(out) = io.out {
        let stem = out.file_name().and_then(|s| s.to_str()).unwrap_or("kms");
        let ext = match io.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let (h_csv, h_json) = husimi_grid_csv(&husimi, &grid);
        let (w_csv, w_json) = wigner_grid_csv(&ts.as_hs, &grid);
        let h_path = out.with_file_name(format!("{stem}_husimi.{ext}"));
        let w_path = out.with_file_name(format!("{stem}_wigner.{ext}"));
        write_text(&h_path, &render_rows("x,y,q", &h_csv, &h_json, io.format))?;
        write_text(&w_path, &render_rows("x,y,re,im", &w_csv, &w_json, io.format))?;
        println!("husimi_grid={} wigner_grid={}", h_path.display(), w_path.display());
    }

    let mut breaches = Vec::new();
    if unitarity_dev > config.unitarity_tol {
        breaches.push(format!("unitarity {unitarity_dev:e} > {:e}", config.unitarity_tol));
    }
    if isometry_dev > config.isometry_tol {
        breaches.push(format!("isometry {isometry_dev:e} > {:e}", config.isometry_tol));
    }
    if resolution_dev > config.resolution_tol {
        breaches.push(format!("resolution {resolution_dev:e} > {:e}", config.resolution_tol));
    }
    if (husimi_norm - 1.0).abs() > config.husimi_norm_tol {
        breaches.push(format!(
            "husimi norm |{husimi_norm:e} - 1| > {:e}",
            config.husimi_norm_tol
        ));
    }
    if husimi_min < 0.0 {
        breaches.push(format!("husimi negative value {husimi_min:e}"));
    }
    if breaches.is_empty() {
        Ok(())
    } else {
        Err(CliError::numerical(breaches.join("; ")))
    }
}
