//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use projdiv::goursat::property_suite;
use projdiv::group::MatGroup;
use projdiv::specs;
use projdiv::{
    bound_scan, gl_order, goursat_verify, j_degree, j_degree_bruteforce, pgl_lower_bound_constant, pgl_order, Error,
    GaloisImageSpec, Ideal, MatAlgebra, ResidueRing, RingSpec,
};

const ENUMERATION_LIMIT: u64 = 1_000_000;
const ORACLE_CAP: usize = 4_000_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn z(n: u64) -> Ideal {
    Ideal::integer(n).unwrap()
}

fn poly(q: u32, coeffs: &[u32]) -> Ideal {
    Ideal::polynomial(&RingSpec::polynomial(q).unwrap(), coeffs.to_vec()).unwrap()
}

fn spec(name: &str) -> GaloisImageSpec {
    specs::bundled(name).unwrap().unwrap()
}

fn rational(n: u64, d: u64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn fail(msg: impl Into<String>) -> Outcome {
    Err(msg.into())
}

/// Closure of the fixed GL_2 generating set against the order formula.
fn gl_closure_matches_formula() -> Outcome {
    let mut ideals: Vec<Ideal> = (1..=100).map(z).collect();
    ideals.extend(RingSpec::polynomial(2).unwrap().ideals_up_to_norm(16));
    ideals.extend(RingSpec::polynomial(3).unwrap().ideals_up_to_norm(27));
    let mut checked = 0;
    let mut largest = BigUint::from(0u32);
    for a in ideals {
        let expected = gl_order(2, &a).unwrap();
        if expected > BigUint::from(ENUMERATION_LIMIT) {
            continue;
        }
        let alg = MatAlgebra::new(ResidueRing::new(&a).unwrap(), 2);
        let group = MatGroup::full_linear(alg, ORACLE_CAP).map_err(|e| format!("{a}: {e}"))?;
        if group.order_big() != expected {
            return fail(format!("GL_2(A/{a}): closure {} vs formula {expected}", group.order()));
        }
        checked += 1;
        largest = largest.max(expected);
    }
    let n12 = gl_order(2, &z(12)).unwrap();
    if n12 != BigUint::from(4608u32) {
        return fail(format!("|GL_2(Z/12)| = {n12}"));
    }
    Ok(format!("{checked} rings, largest group {largest}"))
}

fn full_image_degree_is_pgl() -> Outcome {
    let full = spec("full_gl2_Z");
    for n in 1..=100 {
        let d = j_degree(&full, &z(n)).map_err(|e| e.to_string())?;
        let pgl = pgl_order(2, &z(n)).unwrap();
        if d.degree != pgl {
            return fail(format!("a = {n}: degree {} vs |PGL_2| {pgl}", d.degree));
        }
    }
    for (n, expected) in [(2u64, 6u32), (3, 24), (4, 48), (12, 1152)] {
        let brute = j_degree_bruteforce(&full, &z(n), ORACLE_CAP).map_err(|e| e.to_string())?;
        let fast = j_degree(&full, &z(n)).unwrap();
        if brute.degree != BigUint::from(expected) || !brute.agrees_with(&fast) {
            return fail(format!(
                "a = {n}: brute {} fast {} expected {expected}",
                brute.degree, fast.degree
            ));
        }
    }
    Ok("a <= 100; spot values 6, 24, 48, 1152 confirmed by enumeration".into())
}

fn oracle_agreement() -> Outcome {
    let families: [(&[&str], u64); 3] = [
        (&["full_gl2_Z", "level2_identity", "det_square_Z3", "entangled_Z6"], 60),
        (&["full_gl2_F2T", "levelT_identity_F2T", "det_square_F2T"], 32),
        (&["full_gl2_F3T", "levelT_identity_F3T", "det_square_F3T"], 27),
    ];
    let mut compared = 0;
    let mut skipped = Vec::new();
    for (names, bound) in families {
        for name in names {
            let s = spec(name);
            for a in s.ring().ideals_up_to_norm(bound) {
                let fast = j_degree(&s, &a).map_err(|e| e.to_string())?;
                if fast.group_order > BigUint::from(ENUMERATION_LIMIT) {
                    continue;
                }
                match j_degree_bruteforce(&s, &a, ORACLE_CAP) {
                    Ok(brute) if brute.agrees_with(&fast) => compared += 1,
                    Ok(brute) => {
                        return fail(format!(
                            "{name} at {a}: fast {}/{} vs brute {}/{}",
                            fast.group_order, fast.scalar_order, brute.group_order, brute.scalar_order
                        ))
                    }
                    Err(Error::CapExceeded { .. }) => skipped.push(format!("{name}@{a}")),
                    Err(e) => return fail(format!("{name} at {a}: {e}")),
                }
            }
        }
    }
    if !skipped.is_empty() {
        return fail(format!("oracle exceeded its cap at {}", skipped.join(", ")));
    }
    Ok(format!("{compared} (spec, ideal) pairs agree across 10 specs"))
}

fn upper_bound_holds() -> Outcome {
    let mut rows = 0;
    for (name, bound) in [
        ("full_gl2_Z", 10_000),
        ("level2_identity", 10_000),
        ("det_square_Z3", 10_000),
        ("entangled_Z6", 10_000),
        ("full_gl2_F2T", 64),
        ("levelT_identity_F2T", 64),
        ("det_square_F2T", 64),
    ] {
        let scan = bound_scan(&spec(name), bound).map_err(|e| e.to_string())?;
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        let bad = scan.rows.iter().filter(|r| r.ratio > one || r.ratio <= zero).count();
        if bad > 0 || !scan.violations.is_empty() {
            return fail(format!("{name}: {bad} ratios outside (0, 1]"));
        }
        rows += scan.rows.len();
    }
    Ok(format!("{rows} reports, zero violations"))
}

// Independent floating-point partial product over a plain sieve.
fn euler_partial_product(bound: usize) -> f64 {
    let mut composite = vec![false; bound + 1];
    let mut product = 1.0;
    for p in 2..=bound {
        if composite[p] {
            continue;
        }
        product *= 1.0 - 1.0 / (p as f64 * p as f64);
        let mut k = p * p;
        while k <= bound {
            composite[k] = true;
            k += p;
        }
    }
    product
}

fn lower_bound_shape() -> Outcome {
    let scan = bound_scan(&spec("full_gl2_Z"), 10_000).map_err(|e| e.to_string())?;
    if scan.argmin != z(2310) {
        return fail(format!("minimum at {}, not 2310", scan.argmin));
    }
    let constant = pgl_lower_bound_constant(2, &RingSpec::Integers, 10_000).unwrap();
    if scan.min_ratio <= constant {
        return fail("minimum ratio does not exceed the truncated constant");
    }
    let c = constant.to_f64().unwrap();
    let oracle = euler_partial_product(10_000);
    let six_over_pi2 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    if (c - oracle).abs() > 1e-12 {
        return fail(format!("constant {c} vs independent product {oracle}"));
    }
    if (c - six_over_pi2).abs() >= 1e-3 {
        return fail(format!("constant {c} not within 1e-3 of 6/pi^2"));
    }
    Ok(format!(
        "min ratio {:.6} at 2310 > constant {c:.6}; |constant - 6/pi^2| = {:.2e}",
        scan.min_ratio.to_f64().unwrap(),
        (c - six_over_pi2).abs()
    ))
}

fn chain_verification() -> Outcome {
    let mut runs = 0;
    let cases: [(&str, &[u64]); 3] = [
        ("level2_identity", &[2, 4, 6, 8, 12, 24]),
        ("det_square_Z3", &[6, 15, 18]),
        ("entangled_Z6", &[12, 20]),
    ];
    for (name, ideals) in cases {
        let s = spec(name);
        for &n in ideals {
            let t = goursat_verify(&s, &z(n), ORACLE_CAP).map_err(|e| format!("{name} at {n}: {e}"))?;
            if !t.passed() {
                return fail(format!("{name} at {n}:\n{t}"));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} transcripts, every identity holds"))
}

fn goursat_properties() -> Outcome {
    let report = property_suite(20_240_601, 200, 3).map_err(|e| e.to_string())?;
    if report.samples != 200 {
        return fail(format!("only {} distinct samples", report.samples));
    }
    if !report.failures.is_empty() {
        return fail(report.failures.join("; "));
    }
    Ok(format!(
        "{} subgroups ({} draws), {} box intersections",
        report.samples, report.draws, report.intersections
    ))
}

fn function_field_cases() -> Outcome {
    for (name, a, degree, ratio) in [
        ("full_gl2_F2T", poly(2, &[0, 0, 1]), 48u32, rational(3, 4)),
        ("full_gl2_F3T", poly(3, &[1, 0, 1]), 720, rational(80, 81)),
    ] {
        let s = spec(name);
        let fast = j_degree(&s, &a).map_err(|e| e.to_string())?;
        let brute = j_degree_bruteforce(&s, &a, ORACLE_CAP).map_err(|e| e.to_string())?;
        if fast.degree != BigUint::from(degree) || fast.ratio != ratio || !fast.agrees_with(&brute) {
            return fail(format!("{name} at {a}: degree {} ratio {}", fast.degree, fast.ratio));
        }
    }
    Ok("(T^2) over F_2: 48, ratio 3/4; (T^2+1) over F_3: 720, ratio 80/81".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 GL_2 closure vs order formula", gl_closure_matches_formula, 60),
        ("2 full-image degree = |PGL_2|", full_image_degree_is_pgl, 5),
        ("3 fast path vs enumeration oracle", oracle_agreement, 600),
        ("4 ratio <= 1 on all scans", upper_bound_holds, 120),
        ("5 minimum ratio vs Euler constant", lower_bound_shape, 120),
        ("6 identity chain transcripts", chain_verification, 120),
        ("7 fibered-product property suite", goursat_properties, 300),
        ("8 F_q[T] full-image degrees", function_field_cases, 60),
    ];
    let mut failed = 0;
    for (name, check, target) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let timing = if elapsed > Duration::from_secs(target) {
            format!("{:.1}s, over the {target}s target", elapsed.as_secs_f64())
        } else {
            format!("{:.1}s", elapsed.as_secs_f64())
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{timing}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{timing}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
