//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_traits::Zero;
use prodrec::algebra::rational::pow;
use prodrec::algebra::{frac, rat};
use prodrec::appendix::{self, AppendixContext};
use prodrec::product::{derive_product_recurrence, hankel_check, minimal_relation};
use prodrec::second_order::{
    degenerate_recurrence, factor_extremal_quadratic, fib_lucas_identity_check, galois_polynomial,
    jarden_recurrence, product_char_poly, verify_psi_recursion, UBinomialTable,
};
use prodrec::sequences::{product_values, IndexedValues};
use prodrec::{Error, Rational, RecurrenceRelation, RecurrenceSpec, SecondOrderSpec, SequenceInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn so(p: i64, q: i64) -> SecondOrderSpec {
    SecondOrderSpec::from_ints(p, q).unwrap()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

/// p, q ∈ {±1, ±2, 3}.
fn small_grid() -> Vec<SecondOrderSpec> {
    let vals = [-2, -1, 1, 2, 3];
    vals.iter().flat_map(|&p| vals.iter().map(move |&q| so(p, q))).collect()
}

fn nondegenerate(s: &SecondOrderSpec, upto: i64) -> bool {
    UBinomialTable::new(s).require_nonzero(upto).is_ok()
}

fn criterion_1() -> Outcome {
    for (p, q) in [(1, -1), (2, 4), (3, 2)] {
        let rel = derive_product_recurrence(&so(p, q).to_spec(), 2).map_err(err)?.relation;
        let expected = ints(&[1, -(p * p - q), -(q * q - p * p * q), -q * q * q]);
        ensure(rel.coeffs() == expected.as_slice(), || {
            format!("(p,q)=({p},{q}): got {rel}, expected {expected:?}")
        })?;
    }
    Ok("n=2 relations at (1,-1), (2,4), (3,2) match exactly".into())
}

fn criterion_2() -> Outcome {
    let s = so(2, 4);
    let derived = derive_product_recurrence(&s.to_spec(), 3).map_err(err)?.relation;
    let expected = RecurrenceRelation::from_ints(&[1, 0, 0, 512]).map_err(err)?;
    ensure(derived == expected, || format!("derive gave {derived}"))?;
    let cubes = s.fundamental().values(-3..=30).map_err(err)?.map(|x| pow(x, 3));
    ensure(derived.verify(&cubes, 0..=30).map_err(err)?, || "u^3 not annihilated on [0,30]".into())?;
    let degenerate = degenerate_recurrence(&s, 3).map_err(err)?;
    ensure(degenerate == expected, || format!("degenerate relation gave {degenerate}"))?;
    Ok("[1, 0, 0, 512] from both routes, verified on m in [0, 30]".into())
}

fn criterion_3() -> Outcome {
    let grid = [
        (rat(1), rat(-1)),
        (rat(2), rat(-1)),
        (rat(3), rat(2)),
        (rat(1), rat(2)),
        (rat(3), rat(-2)),
        (rat(-1), rat(-1)),
        (rat(2), rat(3)),
        (frac(1, 2), rat(-1)),
        (rat(3), rat(1)),
        (rat(-2), rat(5)),
    ];
    let mut pairs = 0;
    for (p, q) in grid {
        let s = SecondOrderSpec::new(p, q).map_err(err)?;
        ensure(nondegenerate(&s, 6), || format!("grid point {s} has a zero u_k, k <= 6"))?;
        for n in 1..=5 {
            let j = jarden_recurrence(&s, n).map_err(err)?;
            let d = derive_product_recurrence(&s.to_spec(), n).map_err(err)?.relation;
            ensure(j.is_proportional(&d), || format!("{s}, n={n}: closed form {j} vs derived {d}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (p, q, n) cases proportional"))
}

fn criterion_4() -> Outcome {
    let spec = RecurrenceSpec::from_ints(&[1, 1, 1]).map_err(err)?;
    let report = derive_product_recurrence(&spec, 2).map_err(err)?;
    let rel = report.relation;
    ensure(report.k == 3, || format!("k = {}", report.k))?;
    ensure(rel.order() <= report.k + spec.order(), || format!("order {} too large", rel.order()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let d = rel.order() as i64;
    for trial in 0..50 {
        let factors: Vec<SequenceInstance> = (0..2)
            .map(|_| {
                let init = (0..3).map(|_| rat(rng.gen_range(-20..=20))).collect();
                SequenceInstance::new(spec.clone(), rng.gen_range(-5..=5), init).unwrap()
            })
            .collect();
        let start: i64 = rng.gen_range(-10..=10);
        let end = start + 39;
        let values = product_values(&factors, start - d..=end).map_err(err)?;
        if let Some((m, r)) = rel.first_failure(&values, start..=end).map_err(err)? {
            return Err(format!("trial {trial}: residual {r} at m={m}"));
        }
    }
    Ok(format!("relation {rel} (order {}) annihilates 50 random products over 40 indices", rel.order()))
}

fn criterion_5() -> Outcome {
    let sq = so(1, -1).fundamental().values(0..=40).map_err(err)?.map(|x| x * x);
    for k in 0..=10 {
        let d4 = hankel_check(&sq, 4, k).map_err(err)?;
        ensure(d4.is_zero(), || format!("t=4, k={k}: {d4}"))?;
        let d3 = hankel_check(&sq, 3, k).map_err(err)?;
        ensure(!d3.is_zero(), || format!("t=3, k={k} vanished"))?;
    }
    Ok("t=4 determinants vanish and t=3 determinants do not, k in [0, 10]".into())
}

fn criterion_6() -> Outcome {
    let ones = IndexedValues::from_fn(0..=20, |_| rat(1));
    let squares = IndexedValues::from_fn(0..=20, |m| rat(m * m));
    let c = minimal_relation(&ones, 3, 0..=20).map_err(err)?.ok_or("no relation for 1")?;
    ensure(c.order() == 1, || format!("constant: {c}"))?;
    let y = minimal_relation(&squares, 3, 0..=20).map_err(err)?.ok_or("no relation for m^2")?;
    let target = RecurrenceRelation::from_ints(&[1, -3, 3, -1]).map_err(err)?;
    ensure(y == target, || format!("m^2: {y}"))?;
    let derived = derive_product_recurrence(&RecurrenceSpec::from_ints(&[2, -1]).map_err(err)?, 2)
        .map_err(err)?
        .relation;
    ensure(derived == target, || format!("derived {derived}"))?;
    ensure(derived.verify(&ones, 3..=20).map_err(err)?, || "derived relation misses 1".into())?;
    Ok("orders 1 and 3, derived [1, -3, 3, -1] also kills the constant".into())
}

fn criterion_7() -> Outcome {
    let ws = [(rat(0), rat(1), 0), (rat(2), rat(1), 2), (rat(3), rat(-1), -1)];
    let mut runs = 0;
    let mut skipped = 0;
    for s in small_grid() {
        for n in 1..=5 {
            let ctx = match AppendixContext::new(n, &s) {
                Ok(c) => c,
                Err(Error::ZeroFundamental { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(err(e)),
            };
            for (a, b, r) in ws.iter().cloned() {
                let checks = appendix::run_checks(&ctx.clone().with_w(a, b, r), &[]).map_err(err)?;
                if let Some((name, _)) = checks.iter().find(|(_, ok)| !**ok) {
                    return Err(format!("{s}, n={n}: {name} failed"));
                }
                runs += 1;
            }
        }
        for v in 0..=8 {
            ensure(appendix::check_q_det(v, &s).map_err(err)?, || format!("{s}: det Q_{v}"))?;
        }
    }
    Ok(format!("{runs} context runs all true ({skipped} degenerate skipped), det Q_n law for n <= 8"))
}

fn criterion_8() -> Outcome {
    let rows = fib_lucas_identity_check(0..=50);
    for r in &rows {
        ensure(r.residual.is_zero(), || format!("n={}: residual {}", r.n, r.residual))?;
        ensure(r.witness_is_u, || format!("n={}: witness {:?}", r.n, r.witness))?;
    }
    for s in [so(1, -1), so(2, 3), so(3, 2)] {
        for n in 2..=10 {
            ensure(verify_psi_recursion(&s, n).map_err(err)?, || format!("{s}: recursion at n={n}"))?;
        }
        for n in 1..=10 {
            let (quad, cof) = factor_extremal_quadratic(&s, n).map_err(err)?;
            let psi = product_char_poly(&s, n).map_err(err)?.poly;
            ensure(quad.mul(&cof) == psi, || format!("{s}: factorization at n={n}"))?;
        }
    }
    Ok("Lucas/Fibonacci identities for n <= 50; recursion and extremal factor at three (p, q)".into())
}

fn criterion_9() -> Outcome {
    let mut cases = 0;
    for s in small_grid() {
        for v in 1..=6 {
            if !nondegenerate(&s, v as i64) {
                continue;
            }
            let reversed = galois_polynomial(&s, v).map_err(err)?.reciprocal(v).map_err(err)?;
            let product = product_char_poly(&s, v - 1).map_err(err)?.poly;
            let q_char = appendix::build_q(v, &s).char_poly().map_err(err)?;
            ensure(reversed == product, || format!("{s}, v={v}: reversal {reversed} vs {product}"))?;
            ensure(q_char == product, || format!("{s}, v={v}: Q char poly {q_char}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, q, v) cases agree"))
}

fn criterion_10() -> Outcome {
    let cubes = so(2, 4).fundamental().values(0..=30).map_err(err)?.map(|x| pow(x, 3));
    let sign_flipped = RecurrenceRelation::raw(ints(&[1, -8, 0, -512, 4096])).map_err(err)?;
    let failure = sign_flipped.first_failure(&cubes, 4..=30).map_err(err)?;
    ensure(failure == Some((4, rat(-1024))), || format!("sign-flipped relation: {failure:?}"))?;
    let corrected = RecurrenceRelation::from_ints(&[1, 8, 0, 512, 4096]).map_err(err)?;
    ensure(corrected.verify(&cubes, 4..=30).map_err(err)?, || "corrected relation fails".into())?;
    Ok("sign-flipped relation fails at m=4 with -1024; corrected one holds on [4, 30]".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("second-order squares, closed coefficients", criterion_1),
        ("degenerate cube relation p=2 q=4", criterion_2),
        ("closed form proportional to derived relation", criterion_3),
        ("universality for A=(1,1,1), n=2", criterion_4),
        ("Hankel determinants on Fibonacci squares", criterion_5),
        ("minimal relations for 1 and m", criterion_6),
        ("auxiliary matrix identities", criterion_7),
        ("Fibonacci-Lucas and product polynomial identities", criterion_8),
        ("reversal identity", criterion_9),
        ("order-4 cube relation with flipped signs", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
