//! The `check` subcommand: invariant suites with printed witnesses.

use std::process::ExitCode;

use clap::ValueEnum;
use farey::analytic::{a_k, big_a};
use farey::bcz::{
    check_inclusion, cylinder_matrix, cylinder_polygon, farey_triangle, forward_image,
    omega_area, omega_area_unit, word_region, CylinderWord, RegionSampler,
};
use farey::fraction::{enumerate, FareyFilter};
use farey::runs::verify_identity_32;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Conjugacy,
    Inclusions,
    Identity32,
    Areas,
}

#[derive(clap::Args)]
pub struct CheckArgs {
    /// Which invariant suite to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Largest Q for the exhaustive sweeps.
    #[arg(long = "Q")]
    q: Option<i64>,
    /// Largest gap index l for the identity sweep.
    #[arg(long, default_value_t = 6)]
    ellmax: usize,
    /// Seed of the Monte Carlo area oracle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn cmd_check(a: CheckArgs) -> Result<ExitCode, CliError> {
    let mut all_ok = true;
    let suites: Vec<Suite> = match a.suite {
        Suite::All => vec![Suite::Conjugacy, Suite::Inclusions, Suite::Identity32, Suite::Areas],
        s => vec![s],
    };
    for s in suites {
        let ok = match s {
            Suite::Conjugacy => check_conjugacy(a.q.unwrap_or(100)),
            Suite::Inclusions => check_inclusions(),
            Suite::Identity32 => check_identity32(a.q.unwrap_or(300), a.ellmax)?,
            Suite::Areas => check_areas(a.seed),
            Suite::All => unreachable!(),
        };
        all_ok &= ok;
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn verdict(name: &str, ok: bool, detail: &str) -> bool {
    println!("check {name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    ok
}

/// The triangle map sends (q_i/Q, q_{i+1}/Q) to (q_{i+1}/Q, q_{i+2}/Q)
/// for every consecutive denominator triple; checked in exact integer
/// arithmetic for all Q up to the limit.
fn check_conjugacy(q_limit: i64) -> bool {
    let mut triples = 0u64;
    for q_max in 1..=q_limit {
        let denoms: Vec<i64> = enumerate(q_max, FareyFilter::All)
            .unwrap()
            .map(|f| f.denominator())
            .collect();
        for w in denoms.windows(3) {
            let kappa = (q_max + w[0]) / w[1];
            if kappa * w[1] - w[0] != w[2] {
                return verdict(
                    "conjugacy",
                    false,
                    &format!("Q={q_max}, triple {:?}", w),
                );
            }
            triples += 1;
        }
    }
    verdict("conjugacy", true, &format!("Q <= {q_limit}, {triples} triples"))
}

/// The four cylinder-image inclusions. The union form T(T_3 ∪ T_4) is
/// the substantive statement: the literal intersection T_3 ∩ T_4 has
/// empty interior, so its image inclusion is vacuous.
fn check_inclusions() -> bool {
    let mut ok = true;
    for k in 5..=12i64 {
        let img = forward_image(&[cylinder_polygon(k).unwrap()]).unwrap();
        let chk = check_inclusion(&img, &[1]).unwrap();
        if !chk.holds {
            ok = verdict("inclusions", false, &format!("T T_{k} escapes T_1"));
        }
    }
    let t3 = cylinder_polygon(3).unwrap();
    let t4 = cylinder_polygon(4).unwrap();
    let vacuous = t3.intersect(&t4).is_empty();
    let img34 = forward_image(&[t3.clone(), t4]).unwrap();
    ok &= check_inclusion(&img34, &[1, 2]).unwrap().holds;
    let img2 = forward_image(&[cylinder_polygon(2).unwrap()]).unwrap();
    ok &= check_inclusion(&img2, &[1, 2, 3, 4]).unwrap().holds;
    let quad = t3
        .map_linear(&cylinder_matrix(3))
        .intersect(&cylinder_polygon(2).unwrap());
    let pushed = forward_image(&[quad]).unwrap();
    ok &= check_inclusion(&pushed, &[1, 2]).unwrap().holds;
    verdict(
        "inclusions",
        ok,
        &format!(
            "T T_k in T_1 (k=5..12); union form T(T_3 ∪ T_4) holds, \
             intersection form vacuous: {vacuous}; T T_2 and T(T T_3 ∩ T_2) hold"
        ),
    )
}

fn check_identity32(q_max: i64, ellmax: usize) -> Result<bool, CliError> {
    let rep = verify_identity_32(q_max, ellmax)?;
    match rep.violations.first() {
        None => Ok(verdict(
            "identity32",
            true,
            &format!("Q={q_max}, l<={ellmax}, {} positions", rep.checked),
        )),
        Some(v) => Ok(verdict("identity32", false, &format!("{v:?}"))),
    }
}

/// Closed forms vs the slicing quadrature (1e-8) and a seeded Monte
/// Carlo oracle (5 sigma at 10^6 samples per region).
fn check_areas(seed: u64) -> bool {
    let n = 1_000_000usize;
    let xis: Vec<f64> = (1..=60).map(|i| i as f64 * 0.5).collect();
    let sampler = RegionSampler::new(&farey_triangle(), (0, 1), n, seed);
    for &xi in &xis {
        let closed = big_a(xi);
        if (closed - omega_area_unit(1, xi).unwrap()).abs() > 1e-8 {
            return verdict("areas", false, &format!("A({xi}) quadrature mismatch"));
        }
        let (est, sigma) = sampler.area_ge(1.0 / xi);
        if (closed - est).abs() > 5.0 * sigma + 1e-9 {
            return verdict("areas", false, &format!("A({xi}) MC mismatch: {closed} vs {est}"));
        }
    }
    for k in 1..=4i64 {
        let w = CylinderWord::new(vec![k]).unwrap();
        let (poly, m) = word_region(&w).unwrap();
        let sampler = RegionSampler::new(&poly, (m[1][0], m[1][1]), n, seed.wrapping_add(k as u64));
        for &xi in &xis {
            let closed = a_k(k, xi).unwrap();
            if (closed - omega_area(&w, k, xi).unwrap()).abs() > 1e-8 {
                return verdict("areas", false, &format!("A_{k}({xi}) quadrature mismatch"));
            }
            let (est, sigma) = sampler.area_ge(k as f64 / xi);
            if (closed - est).abs() > 5.0 * sigma + 1e-9 {
                return verdict(
                    "areas",
                    false,
                    &format!("A_{k}({xi}) MC mismatch: {closed} vs {est}"),
                );
            }
        }
    }
    verdict("areas", true, &format!("A, A_1..A_4 on 60 xi values, seed {seed}"))
}
