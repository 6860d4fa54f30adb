use std::collections::hash_map::RandomState;
use std::hash::BuildHasher;

use jdr_core::ber_sim::{self, BerEstimator};
use jdr_core::capacity_limits::{self as cl, EnvelopeFamily};
use jdr_core::codes::{self, BinaryCode};
use jdr_core::link_budget::{self, LinkParams};
use jdr_core::superchannel::{capacity_curves, two_symbol_ratio_curve, CurveFamily, TwoSymbolReceiver};
use serde_json::{json, Value};

use crate::args::{
    Apertures, BerArgs, CodeArg, CodebookArgs, EstimatorArg, GridArgs, LimitsArgs, LimitsFamily, LinkArgs, ReceiverArg,
    SuperchannelArgs, SuperFamily, TradeoffArgs,
};
use crate::output::{emit, Cell, Csv, Manifest};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Log-spaced grid with both endpoints reproduced exactly.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi.is_finite() && hi >= lo) {
        return Err(CliError::Usage(format!("grid needs 0 < min <= max, got [{lo}, {hi}]")));
    }
    match points {
        0 => Err(CliError::Usage("grid needs at least one point".into())),
        1 if lo == hi => Ok(vec![lo]),
        1 => Err(CliError::Usage("a one-point grid needs min == max".into())),
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let last = points - 1;
            Ok((0..points)
                .map(|i| match i {
                    0 => lo,
                    i if i == last => hi,
                    i => (a + (b - a) * i as f64 / last as f64).exp(),
                })
                .collect())
        }
    }
}

fn grid(args: &GridArgs, default: (f64, f64, usize), manifest: Manifest) -> Result<(Vec<f64>, Manifest)> {
    if let Some(list) = &args.nbar {
        let mut sorted = list.clone();
        if sorted.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(CliError::Usage("--nbar values must be finite and >= 0".into()));
        }
        sorted.sort_by(f64::total_cmp);
        let manifest = manifest.param("nbar", sorted.clone());
        return Ok((sorted, manifest));
    }
    let lo = args.nbar_min.unwrap_or(default.0);
    let hi = args.nbar_max.unwrap_or(default.1);
    let points = args.points.unwrap_or(default.2);
    let manifest = manifest.param("nbar_min", lo).param("nbar_max", hi).param("points", points);
    Ok((log_grid(lo, hi, points)?, manifest))
}

fn receiver(arg: ReceiverArg) -> TwoSymbolReceiver {
    match arg {
        ReceiverArg::Structured => TwoSymbolReceiver::Structured,
        ReceiverArg::Mpe => TwoSymbolReceiver::Mpe,
    }
}

fn receiver_name(arg: ReceiverArg) -> &'static str {
    match arg {
        ReceiverArg::Structured => "structured",
        ReceiverArg::Mpe => "mpe",
    }
}

pub fn limits(args: &LimitsArgs) -> Result<()> {
    if args.m_max == 0 {
        return Err(CliError::Usage("--m-max must be >= 1".into()));
    }
    let families: Vec<LimitsFamily> = if args.families.is_empty() {
        LimitsFamily::ALL.to_vec()
    } else {
        args.families.clone()
    };
    let manifest = Manifest::new("limits")
        .param("families", families.iter().map(|f| f.column()).collect::<Vec<_>>())
        .param("m_max", args.m_max)
        .param("receiver", receiver_name(args.receiver));
    let (nbars, manifest) = grid(&args.grid, (1e-6, 10.0, 200), manifest)?;
    if nbars.iter().any(|&n| n <= 0.0) {
        return Err(CliError::Usage("PIE is undefined at nbar = 0".into()));
    }

    let two_symbol = if families.contains(&LimitsFamily::TwoSymbol) {
        Some(two_symbol_ratio_curve(&nbars, receiver(args.receiver))?)
    } else {
        None
    };
    let mut header = vec!["nbar"];
    header.extend(families.iter().map(|f| f.column()));
    let mut csv = Csv::new(&header);
    for (i, &n) in nbars.iter().enumerate() {
        let mut row = vec![Cell::F(n)];
        for family in &families {
            let pie = match family {
                LimitsFamily::Ultimate => cl::pie_ultimate(n)?,
                LimitsFamily::HolevoBpsk => cl::holevo_bpsk(n)? / n,
                LimitsFamily::C1Dolinar => cl::c1_bpsk_dolinar(n)? / n,
                LimitsFamily::HadamardEnvelope => cl::pie_envelope(n, EnvelopeFamily::Hadamard, 1..=args.m_max)?.1,
                LimitsFamily::RmGmEnvelope => cl::pie_envelope(n, EnvelopeFamily::RmGm, 1..=args.m_max)?.1,
                LimitsFamily::TwoSymbol => two_symbol.as_ref().expect("computed above")[i].i2 / n,
            };
            row.push(Cell::F(pie));
        }
        csv.row(&row);
    }
    emit(&csv.into_string(), &manifest, args.out.as_deref())?;
    Ok(())
}

pub fn tradeoff(args: &TradeoffArgs) -> Result<()> {
    let manifest = Manifest::new("tradeoff")
        .param("modes_list", args.modes_list.clone())
        .param("nr_min", args.nr_min)
        .param("nr_max", args.nr_max)
        .param("points", args.points);
    let n_r = log_grid(args.nr_min, args.nr_max, args.points)?;
    let mut csv = Csv::new(&["modes", "n_r", "spectral_efficiency", "pie"]);
    for &modes in &args.modes_list {
        for p in cl::tradeoff_curve(modes, &n_r)? {
            csv.row(&[Cell::U(u64::from(p.modes)), Cell::F(p.n_r), Cell::F(p.spectral_efficiency), Cell::F(p.pie)]);
        }
    }
    emit(&csv.into_string(), &manifest, args.out.as_deref())?;
    Ok(())
}

fn superchannel_csv(family: SuperFamily, m: Option<u32>, args: &SuperchannelArgs, nbars: &[f64]) -> Result<String> {
    if family == SuperFamily::TwoSymbol {
        let points = two_symbol_ratio_curve(nbars, receiver(args.receiver))?;
        let mut csv = Csv::new(&["nbar", "bits_per_symbol", "pie", "c1", "ratio", "p_star"]);
        for p in points {
            let pie = if p.nbar > 0.0 { p.i2 / p.nbar } else { 0.0 };
            csv.row(&[Cell::F(p.nbar), Cell::F(p.i2), Cell::F(pie), Cell::F(p.c1), Cell::F(p.ratio), Cell::F(p.p_star)]);
        }
        return Ok(csv.into_string());
    }
    let m = m.expect("code families carry an order");
    let curve = match family {
        SuperFamily::HadamardJdr => CurveFamily::HadamardJdr { m },
        SuperFamily::RmGm => CurveFamily::RmGm { m },
        SuperFamily::RmMpe => CurveFamily::RmMpe { m },
        SuperFamily::TwoSymbol => unreachable!(),
    };
    let mut csv = Csv::new(&["nbar", "bits_per_symbol", "pie"]);
    for p in capacity_curves(curve, nbars, args.verify)? {
        csv.row(&[Cell::F(p.nbar), Cell::F(p.bits_per_symbol), Cell::F(p.pie)]);
    }
    Ok(csv.into_string())
}

pub fn superchannel(args: &SuperchannelArgs) -> Result<()> {
    let family = args.family;
    let orders: Vec<Option<u32>> = match (family, args.m.as_slice()) {
        (SuperFamily::TwoSymbol, []) => vec![None],
        (SuperFamily::TwoSymbol, _) => return Err(CliError::Usage("two_symbol takes no --m".into())),
        (_, []) => return Err(CliError::Usage(format!("--m is required for {}", family.name()))),
        (_, ms) => ms.iter().copied().map(Some).collect(),
    };
    let base = Manifest::new("superchannel")
        .param("family", family.name())
        .param("verify", args.verify);
    let base = if family == SuperFamily::TwoSymbol {
        base.param("receiver", receiver_name(args.receiver))
    } else {
        base
    };
    let (nbars, base) = grid(&args.grid, (1e-4, 10.0, 100), base)?;

    if orders.len() > 1 {
        let Some(dir) = &args.out_dir else {
            return Err(CliError::Usage("several --m values need --out-dir (one file per order)".into()));
        };
        std::fs::create_dir_all(dir)?;
        for m in orders {
            let body = superchannel_csv(family, m, args, &nbars)?;
            let manifest = Manifest { params: base.params.clone(), ..Manifest::new("superchannel") }
                .param("m", m.expect("code family"));
            let path = dir.join(format!("{}_m{}.csv", family.name(), m.expect("code family")));
            emit(&body, &manifest, Some(&path))?;
        }
        return Ok(());
    }
    let m = orders[0];
    let body = superchannel_csv(family, m, args, &nbars)?;
    let manifest = match m {
        Some(m) => base.param("m", m),
        None => base,
    };
    let out = match (&args.out, &args.out_dir) {
        (Some(path), _) => Some(path.clone()),
        (None, Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            let stem = match m {
                Some(m) => format!("{}_m{m}", family.name()),
                None => format!("{}_{}", family.name(), receiver_name(args.receiver)),
            };
            Some(dir.join(format!("{stem}.csv")))
        }
        (None, None) => None,
    };
    emit(&body, &manifest, out.as_deref())?;
    Ok(())
}

pub fn ber(args: &BerArgs) -> Result<()> {
    let seed = args.seed.unwrap_or_else(|| {
        let seed = RandomState::new().hash_one(std::time::SystemTime::now());
        eprintln!("seed: {seed}");
        seed
    });
    let estimator = match args.estimator {
        EstimatorArg::Importance => BerEstimator::MixtureImportance,
        EstimatorArg::Direct => BerEstimator::Direct,
    };
    let mut manifest = Manifest::new("ber")
        .param("m", args.m)
        .param("trials", args.trials)
        .param("estimator", args.estimator.name());
    manifest.seed = Some(seed);
    let (nbars, manifest) = grid(&args.grid, (1e-3, 1e-1, 20), manifest)?;

    let mut csv = Csv::new(&["nbar", "uncoded_dr", "hadamard_dr", "hadamard_dr_stderr", "hadamard_jdr"]);
    for (i, &n) in nbars.iter().enumerate() {
        let point_seed = ber_sim::derive_point_seed(seed, i as u64);
        let dr = ber_sim::hadamard_dr_ber_with(args.m, n, args.trials, point_seed, estimator)?;
        let jdr = ber_sim::hadamard_jdr_ber(args.m, n)?;
        csv.row(&[
            Cell::F(n),
            Cell::F(ber_sim::uncoded_bpsk_ber(n)?),
            Cell::F(dr.ber),
            Cell::F(dr.stderr),
            Cell::F(jdr.ber),
        ]);
    }
    emit(&csv.into_string(), &manifest, args.out.as_deref())?;
    Ok(())
}

fn pair(values: &[f64], flag: &str) -> Result<(f64, f64)> {
    match values {
        [a] => Ok((*a, *a)),
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("{flag} takes one or two values (tx, rx)"))),
    }
}

pub fn link(args: &LinkArgs) -> Result<()> {
    let req = link_budget::required_modes(args.pie, args.se)?;
    let Apertures { radii, areas } = &args.apertures;
    let (params, aperture_param) = match (radii, areas) {
        (Some(r), None) => {
            let (t, x) = pair(r, "--radii")?;
            (
                LinkParams::with_radii(args.wavelength, args.range, t, x, args.slot_rate, req.n_r)?,
                ("radii", json!([t, x])),
            )
        }
        (None, Some(a)) => {
            let (t, x) = pair(a, "--areas")?;
            (
                LinkParams::with_areas(args.wavelength, args.range, t, x, args.slot_rate, req.n_r)?,
                ("areas", json!([t, x])),
            )
        }
        _ => return Err(CliError::Usage("give exactly one of --radii or --areas".into())),
    };
    let modes = link_budget::mode_count(&params)?;
    let pr = link_budget::power_and_rate(&params, args.pie)?;
    let mut doc = json!({
        "fresnel_number": modes.fresnel_number,
        "mode_count": modes.modes,
        "spatial_modes": modes.spatial_modes,
        "per_mode_transmissivity": modes.per_mode_transmissivity,
        "n_r": req.n_r,
        "nbar_star": req.nbar_star,
        "modes_required": req.modes,
        "power_watts": pr.watts,
        "rate_bps": pr.bits_per_second,
    });
    if let Some(w) = modes.warning {
        doc["regime_warning"] = Value::String(w);
    }
    let mut body = serde_json::to_string_pretty(&doc).expect("valid JSON");
    body.push('\n');
    let manifest = Manifest::new("link")
        .param("wavelength", args.wavelength)
        .param("range", args.range)
        .param(aperture_param.0, aperture_param.1)
        .param("slot_rate", args.slot_rate)
        .param("pie", args.pie)
        .param("se", args.se);
    emit(&body, &manifest, args.out.as_deref())?;
    Ok(())
}

pub fn codebook(args: &CodebookArgs) -> Result<()> {
    let code: BinaryCode = match args.code {
        CodeArg::Hadamard => codes::hadamard_code(args.m, true)?,
        CodeArg::HadamardPunctured => codes::hadamard_code(args.m, false)?,
        CodeArg::Rm1 => codes::rm1_code(args.m)?,
        CodeArg::TwoSymbol => codes::two_symbol_code(),
    };
    let manifest = Manifest::new("codebook").param("code", args.code.name()).param("m", args.m);
    emit(&code.to_codebook_string(), &manifest, args.out.as_deref())?;
    Ok(())
}
