//! Reference values computed with mpmath at 50 digits.

#![allow(clippy::excessive_precision)]

use std::sync::Arc;

use ergosum::cf::{ConvergentTable, IrrationalSpec};
use ergosum::ostrowski::{
    enumerate_admissible, expand, is_admissible, reconstruct, OstrowskiDigits,
};
use ergosum::stepfn::StepFunction;
use ergosum::sums::{sum_naive, ErgodicSums, SumProfile};

fn table(name: &str, len: usize) -> ConvergentTable {
    ConvergentTable::new(&name.parse().unwrap(), len).unwrap()
}

#[test]
fn convergents_match_mpmath() {
    type Case = (&'static str, [u64; 6], [u64; 13], [u64; 13]);
    let cases: [Case; 3] = [
        (
            "golden",
            [1, 1, 1, 1, 1, 1],
            [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233],
            [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144],
        ),
        (
            "sqrt2",
            [2, 2, 2, 2, 2, 2],
            [1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741, 13860, 33461],
            [0, 1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741, 13860],
        ),
        (
            "sqrt3",
            [1, 2, 1, 2, 1, 2],
            [1, 1, 3, 4, 11, 15, 41, 56, 153, 209, 571, 780, 2131],
            [0, 1, 2, 3, 8, 11, 30, 41, 112, 153, 418, 571, 1560],
        ),
    ];
    for (name, a, q, p) in cases {
        let t = table(name, 14);
        assert_eq!(t.partial_quotients(6), a.to_vec(), "{name}");
        for n in 0..13 {
            assert_eq!(t.q_u128(n), q[n] as u128, "{name} q_{n}");
            assert_eq!(t.p(n).to_string(), p[n].to_string(), "{name} p_{n}");
        }
    }
}

#[test]
fn norms_of_denominators() {
    let cases = [
        ("golden", 5, 0.0557280900008412143633053250749),
        ("golden", 10, 0.00502499874064149020822825854179),
        ("sqrt2", 5, 0.00505063388334658388178930532113),
        ("sqrt2", 10, 0.0000615839386751704949656878766691),
        ("sqrt3", 5, 0.0192378864668405970883048774119),
        ("sqrt3", 10, 0.00101112182893460417186099985312),
    ];
    for (name, n, want) in cases {
        let t = table(name, 14);
        let got = t.norm_multiple(t.q(n)).unwrap();
        assert!(
            (got.to_f64() - want).abs() < 1e-16 * want.max(1e-3),
            "{name} n={n}"
        );
        assert!(got.radius() < 1e-40);
    }
}

#[test]
fn exact_variances() {
    // Σ_{j,k<n} A((j-k)α) with the closed-form autocorrelations
    // A_φ⁰(t) = 1/12 - {t}(1-{t})/2 and A_ψ(t) = 1 - 4||t||
    let cases = [
        (
            "golden",
            2,
            0.09726535583354363692415966,
            0.9442719099991587856366947,
        ),
        ("golden", 5, 0.09959457084490003082878155, 1.0),
        ("golden", 13, 0.09994071138832450952402155, 1.0),
        (
            "golden",
            100,
            0.2352851800205339534813011,
            2.112148461088531386117091,
        ),
        (
            "sqrt2",
            2,
            0.09069264621404818692826716,
            0.6862915010152396095864902,
        ),
        ("sqrt2", 5, 0.09343460110002650109691194, 1.0),
        (
            "sqrt2",
            13,
            0.1661739325812667524323909,
            1.470996024365750630075765,
        ),
        (
            "sqrt2",
            100,
            0.2054229460996059403853095,
            2.038671967512332493232313,
        ),
    ];
    for (name, n, phi0, psi) in cases {
        let t = Arc::new(table(name, 20));
        for (f, want) in [
            (StepFunction::phi0(), phi0),
            (StepFunction::psi_half(), psi),
        ] {
            let sums = ErgodicSums::new(f, Arc::clone(&t));
            let exact = sums.variance_exact(n).unwrap();
            let scan = sums.variance_scan(n)[n as usize];
            assert!(
                (exact - want).abs() < 1e-13,
                "{name} n={n} profile {exact} vs {want}"
            );
            assert!(
                (scan - want).abs() < 1e-13,
                "{name} n={n} scan {scan} vs {want}"
            );
        }
    }
}

#[test]
fn phi0_single_term_is_one_twelfth() {
    let t = Arc::new(table("golden", 10));
    let v = ErgodicSums::new(StepFunction::phi0(), t)
        .variance_exact(1)
        .unwrap();
    assert!((v - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn ostrowski_worked_examples() {
    let g = table("golden", 12);
    assert_eq!(expand(&g, 4).unwrap().digits, vec![0, 1, 0, 1]);
    assert_eq!(expand(&g, 8).unwrap().digits, vec![0, 0, 0, 0, 0, 1]);
    assert!(!is_admissible(&g, &OstrowskiDigits::new(vec![0, 1, 1])));
    let s = table("sqrt2", 12);
    assert_eq!(expand(&s, 7).unwrap().digits, vec![0, 1, 1]);
    assert_eq!(
        reconstruct(&s, &OstrowskiDigits::new(vec![0, 1, 1])).unwrap(),
        7
    );
    let mut images: Vec<u128> = enumerate_admissible(&s, 2)
        .map(|w| reconstruct(&s, &w).unwrap())
        .collect();
    images.sort_unstable();
    assert_eq!(images, (0..12).collect::<Vec<_>>());
}

/// Zeckendorf digits of `n` over the Fibonacci numbers 1, 2, 3, 5, ...
/// computed greedily, independently of the Ostrowski code.
fn zeckendorf(n: u128) -> Vec<u64> {
    let mut fib = vec![1u128, 2];
    while *fib.last().unwrap() <= n {
        let k = fib.len();
        fib.push(fib[k - 1] + fib[k - 2]);
    }
    let mut digits = vec![0u64; fib.len()];
    let mut r = n;
    for k in (0..fib.len()).rev() {
        if fib[k] <= r {
            digits[k] = 1;
            r -= fib[k];
        }
    }
    while digits.last() == Some(&0) {
        digits.pop();
    }
    digits
}

#[test]
fn golden_expansion_is_zeckendorf() {
    // q_1 = q_0 = 1 for golden and b_0 <= a_1 - 1 = 0, so the Ostrowski digits
    // are the Zeckendorf digits shifted by one place
    let g = table("golden", 30);
    for n in 0..5000u128 {
        let w = expand(&g, n).unwrap();
        let z = zeckendorf(n);
        let shifted: Vec<u64> = if z.is_empty() {
            vec![]
        } else {
            std::iter::once(0).chain(z.iter().copied()).collect()
        };
        assert_eq!(w.digits, shifted, "n = {n}");
        assert!(w.digits.windows(2).all(|p| p[0] * p[1] == 0));
    }
}

#[test]
fn profile_agrees_with_direct_sum() {
    let spec = IrrationalSpec::golden();
    let t = table("golden", 30);
    let alpha = t.alpha_phase();
    let phi = StepFunction::psi_half();
    for n in [1u64, 7, 89, 1000] {
        let p = SumProfile::build(&phi, alpha, n).unwrap();
        for i in 0..50u32 {
            let x = ergosum::phase::Phase::from_ratio(2 * i as i128 + 1, 101);
            let direct = sum_naive(&phi, alpha, n, x).unwrap();
            assert_eq!(p.eval_phase(x), direct, "{spec} n={n} x={x:?}");
        }
    }
}
