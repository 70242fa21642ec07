//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::time::{Duration, Instant};

use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{One, Zero};

use tamehopf::catalog::{self, GridReport, TameFamily};
use tamehopf::combinatorics::{self, Kind};
use tamehopf::witnesses;
use tamehopf::{Character, Conductor, Cyc, FinAbGroup, WeightSeq};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Gaussian binomial [m, l]_t by the Pascal recurrence, as integer coefficients.
fn gaussian_binomial(m: usize, l: usize) -> Vec<u64> {
    // rows[j] = [i, j]_t for the current i
    let mut rows: Vec<Vec<u64>> = vec![vec![1]];
    for i in 1..=m {
        let mut next = vec![vec![0u64]; i + 1];
        for j in 0..=i {
            let mut p = vec![0u64; j * (i - j) + 1];
            if j >= 1 {
                for (k, c) in rows[j - 1].iter().enumerate() {
                    p[k] += c;
                }
            }
            if j < i {
                for (k, c) in rows[j].iter().enumerate() {
                    p[k + j] += c;
                }
            }
            next[j] = p;
        }
        rows = next;
    }
    rows[l].clone()
}

fn eval_poly(coeffs: &[u64], t: &Cyc) -> Cyc {
    let l = t.conductor();
    let mut acc = Cyc::zero(l);
    let mut pow = Cyc::one(l);
    for c in coeffs {
        acc += &(&pow * &Cyc::from_int(l, *c as i64));
        pow = &pow * t;
    }
    acc
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for m in 2..=10 {
        if !combinatorics::h_identity_check(m).unwrap() {
            bad.push(format!("identity m={m}"));
        }
        for l in 1..m {
            let oracle = gaussian_binomial(m, l);
            for kind in [Kind::H1, Kind::H2, Kind::H3] {
                if combinatorics::h_poly(kind, m, l).unwrap().coeffs != oracle {
                    bad.push(format!("{kind:?}({m},{l})"));
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(10),
        format!(
            "H1=H2=H3=[m,l]_t for 2<=m<=10, 0<l<m; mismatches {bad:?}; {:.2?}",
            t
        ),
    )
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for m in 2..=12usize {
        let l = Conductor::lcm_of([m as u32]);
        let step = (l.get() as usize / m) as i64;
        for k in 0..m {
            let t = Cyc::root_of_unity(l, step * k as i64);
            let lib = combinatorics::vanishing_criterion(m, &t).unwrap();
            let oracle = (1..m).all(|j| eval_poly(&gaussian_binomial(m, j), &t).is_zero());
            let primitive = gcd(k, m) == 1;
            checked += 1;
            if lib != primitive || oracle != primitive {
                bad.push((m, k));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(60),
        format!(
            "{checked} pairs (m,k), vanishing <=> gcd(k,m)=1; failures {bad:?}; {:.2?}",
            t
        ),
    )
}

fn criterion3() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=12usize {
        let l = Conductor::lcm_of([m as u32]);
        let zeta = Cyc::root_of_unity(l, (l.get() as usize / m) as i64);
        // expand ∏ (1 + ζ^r x) directly
        let mut poly = vec![Cyc::one(l)];
        for r in 1..=m {
            let z = zeta.pow(r as i64).unwrap();
            let mut next = vec![Cyc::zero(l); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + 1] += &(c * &z);
            }
            poly = next;
        }
        let mut expect = vec![Cyc::zero(l); m + 1];
        expect[0] = Cyc::one(l);
        expect[m] = Cyc::from_int(l, if m % 2 == 0 { -1 } else { 1 });
        if poly != expect || !combinatorics::generating_function_check(m) {
            bad.push(m);
        }
    }
    outcome(
        bad.is_empty(),
        format!("prod (1+z_m^r x) = 1-(-x)^m for m<=12; failures {bad:?}"),
    )
}

fn mu4_and_two(l: Conductor) -> Vec<Cyc> {
    let mut out: Vec<Cyc> = (0..4)
        .map(|k| Cyc::root_of_unity(l, k * (l.get() as i64 / 4)))
        .collect();
    out.push(Cyc::from_int(l, 2));
    out
}

fn grid_families(l: Conductor, i3: &[usize], i4_max: usize) -> Vec<TameFamily> {
    let roots4: Vec<Cyc> = mu4_and_two(l).into_iter().take(4).collect();
    let mut fams = Vec::new();
    for a in mu4_and_two(l) {
        fams.push(TameFamily::I1 { a });
    }
    for &n in i3 {
        fams.push(TameFamily::I3 { n });
    }
    for m in 1..=i4_max {
        fams.push(TameFamily::I4 { m });
    }
    for m in 1..=3 {
        for a in &roots4 {
            fams.push(TameFamily::I2 { m, a: a.clone() });
        }
    }
    fams
}

/// One positive of a grid, rebuilt for the follow-up criteria.
struct Positive {
    label: String,
    group: FinAbGroup,
    weights: WeightSeq,
    chars: (Character, Character),
    family: TameFamily,
    conductor: Conductor,
    dim: Option<usize>,
}

struct GridRun {
    report: GridReport,
    positives: Vec<Positive>,
}

fn run_grid(
    group: &FinAbGroup,
    weights: WeightSeq,
    l: Conductor,
    families: Vec<TameFamily>,
) -> GridRun {
    let pairs = catalog::all_char_pairs(group, l);
    let report = catalog::oracle_grid(group, &weights, l, &pairs, &families).expect("grid runs");
    let positives = report
        .positives
        .iter()
        .map(|p| Positive {
            label: format!("{} W={} {} {:?}", group, p.weights, p.family, p.params),
            group: group.clone(),
            weights: weights.clone(),
            chars: pairs[p.pair].clone(),
            family: families[p.family_index].clone(),
            conductor: l,
            dim: p.dim,
        })
        .collect();
    GridRun { report, positives }
}

fn criterion4(positives: &mut Vec<Positive>) -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2u32, 3, 4, 6] {
        let g = FinAbGroup::cyclic(n);
        let l = Conductor::lcm_of([n, 4]);
        let w = WeightSeq::new(vec![g.generator(0), g.generator(0)]);
        let mut i3 = vec![2, 3, n as usize];
        i3.dedup();
        let run = run_grid(&g, w, l, grid_families(l, &i3, 2));
        let r = &run.report;
        let expected_positives = usize::from(n % 2 == 0);
        let unique_ok = r.positives.len() == expected_positives
            && r.positives.iter().all(|p| {
                p.family == "I2(m=1,a=-1)"
                    && p.params.get("p").map(String::as_str) == Some("-1")
                    && p.params.get("q").map(String::as_str) == Some("-1")
            });
        ok &= r.disagreements.is_empty() && unique_ok;
        details.push(format!(
            "Z{n}: {} points, {} disagreements, positives {:?}",
            r.points,
            r.disagreements.len(),
            r.positives
                .iter()
                .map(|p| p.family.clone())
                .collect::<Vec<_>>()
        ));
        positives.extend(run.positives);
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(600);
    outcome(ok, format!("{}; {:.2?}", details.join("; "), t))
}

fn criterion5(positives: &mut Vec<Positive>) -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for orders in [vec![2u32, 2], vec![4, 2], vec![4, 4]] {
        let g = FinAbGroup::new(orders).unwrap();
        let l = Conductor::new(4).unwrap();
        let w = WeightSeq::new(vec![g.generator(0), g.generator(1)]);
        let run = run_grid(&g, w, l, grid_families(l, &[2, 3], 2));
        let r = &run.report;
        let lcm_ok = r.positives.iter().all(|p| p.m_divides_lcm != Some(false));
        ok &= r.disagreements.is_empty() && lcm_ok;
        details.push(format!(
            "{g}: {} points, {} disagreements, {} positives, m | lcm: {lcm_ok}",
            r.points,
            r.disagreements.len(),
            r.positives.len()
        ));
        positives.extend(run.positives);
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(1800);
    outcome(ok, format!("{}; {:.2?}", details.join("; "), t))
}

fn criterion6(positives: &[Positive]) -> Outcome {
    let mut bad = Vec::new();
    for p in positives {
        let h = catalog::hopf_structure(
            &p.group,
            &p.weights,
            vec![p.chars.0.clone(), p.chars.1.clone()],
            p.conductor,
        )
        .expect("allowable");
        let r = h.verify_hopf_axioms(4);
        if !r.passed {
            bad.push(format!(
                "{}: {:?}",
                p.label,
                r.first_failure().map(|d| &d.check)
            ));
        }
    }
    outcome(
        bad.is_empty() && !positives.is_empty(),
        format!(
            "axioms to degree 4 on {} positives; failures {bad:?}",
            positives.len()
        ),
    )
}

fn criterion7(positives: &[Positive]) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for p in positives {
        if let TameFamily::I2 { m, .. } = p.family {
            checked += 1;
            if p.dim != Some(4 * m * p.group.order()) {
                bad.push(format!("{}: dim {:?}", p.label, p.dim));
            }
        }
    }
    let book =
        witnesses::book_algebra(2, &Cyc::from_int(Conductor::new(2).unwrap(), -1), 1).unwrap();
    let (_, book_ideal) = witnesses::book_domain();
    let book_dim = catalog::dimension_formula(&book_ideal).unwrap();
    let neg = Cyc::from_int(Conductor::new(2).unwrap(), -1);
    let taft = witnesses::taft(2, &neg).unwrap();
    let tt = witnesses::tensor_hopf(&taft, &taft).unwrap();
    let (_, taft_ideal) = witnesses::taft_domain();
    let taft_dim = catalog::dimension_formula(&taft_ideal).unwrap();
    let ok = bad.is_empty()
        && checked > 0
        && book_dim == 8
        && book.dim() == 8
        && taft_dim == 16
        && tt.dim() == 16;
    outcome(
        ok,
        format!(
            "dim = 4m|G| on {checked} I2 positives (failures {bad:?}); h(-1,1): {book_dim} vs presented {}; Taft x Taft: {taft_dim} vs presented {}",
            book.dim(),
            tt.dim()
        ),
    )
}

fn mutations_all_fail(phi: &witnesses::HopfMorphism) -> (usize, usize) {
    let n = phi.domain.dim();
    let m = phi.codomain.dim();
    let mut survived = 0;
    for row in 0..n {
        for col in 0..m {
            if witnesses::verify_hopf_iso(&witnesses::mutate_entry(phi, row, col)).passed {
                survived += 1;
            }
        }
    }
    (n * m, survived)
}

fn criterion8() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for phi in [
        witnesses::phi_book().unwrap(),
        witnesses::phi_taft().unwrap(),
    ] {
        let r = witnesses::verify_hopf_iso(&phi);
        let (total, survived) = mutations_all_fail(&phi);
        ok &= r.passed && survived == 0;
        details.push(format!(
            "{}: {} checks {}, {}/{} single-entry mutations rejected",
            phi.name,
            r.checks.len(),
            if r.passed { "pass" } else { "FAIL" },
            total - survived,
            total
        ));
    }
    outcome(ok, details.join("; "))
}

/// dim of k⟨x,y⟩_d / (ideal generated by `rels`)_d, by exact row reduction.
fn free_quotient_dims(rels: &[Vec<(Vec<u8>, i64)>], depth: usize) -> Vec<usize> {
    let word_index = |w: &[u8]| w.iter().fold(0usize, |acc, &b| acc * 2 + b as usize);
    let mut dims = Vec::new();
    for d in 0..=depth {
        let size = 1usize << d;
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for r in rels {
            let rd = r[0].0.len();
            if rd > d {
                continue;
            }
            let pad = d - rd;
            for split in 0..=pad {
                for u in 0..(1usize << split) {
                    for v in 0..(1usize << (pad - split)) {
                        let mut row = vec![BigRational::zero(); size];
                        for (w, c) in r {
                            let idx = (u << (d - split)) | (word_index(w) << (pad - split)) | v;
                            row[idx] += BigRational::from_integer((*c).into());
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let mut rank = 0;
        for col in 0..size {
            let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = BigRational::one() / rows[rank][col].clone();
            for i in 0..rows.len() {
                if i != rank && !rows[i][col].is_zero() {
                    let f = &rows[i][col] * &inv;
                    let pivot_row = rows[rank].clone();
                    for (x, p) in rows[i].iter_mut().zip(pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        dims.push(size - rank);
    }
    while dims.last() == Some(&0) {
        dims.pop();
    }
    dims
}

fn criterion9() -> Outcome {
    let r = catalog::case5_refutation();
    // x = 0, y = 1; words in multiplication order
    let yx_x2 = vec![(vec![1, 0], 1), (vec![0, 0], -1)];
    let y2 = vec![(vec![1, 1], 1)];
    let yxy = vec![(vec![1, 0, 1], 1)];
    let lambda_dims = free_quotient_dims(&[yx_x2.clone(), y2.clone()], 6);
    let reduced_dims = free_quotient_dims(&[yx_x2, y2, yxy], 6);
    let red = &r.frobenius_reduction;
    let ok = red.dim == 5
        && red.j3_zero
        && red.right_socle.len() == 2
        && red.left_socle.len() == 2
        && red.dims == reduced_dims
        && r.lambda.dims == lambda_dims
        && !r.lambda.socle_simple
        && r.excluded;
    outcome(
        ok,
        format!(
            "Frobenius reduction Lambda/(yxy): dims {:?} (oracle {:?}), dim {}, J^3=0 {}, soc dim {}; Lambda itself: dims {:?} (oracle {:?}), dim {}, soc dim {}, not simple",
            red.dims,
            reduced_dims,
            red.dim,
            red.j3_zero,
            red.right_socle.len(),
            r.lambda.dims,
            lambda_dims,
            r.lambda.dim,
            r.lambda.right_socle.len()
        ),
    )
}

fn criterion10() -> Outcome {
    let g = FinAbGroup::cyclic(4);
    let l = Conductor::new(4).unwrap();
    let g2 = g.pow(&g.generator(0), 2);
    let w = WeightSeq::new(vec![g2.clone(), g2]);
    let h = catalog::hopf_structure(
        &g,
        &w,
        vec![Character::trivial(&g, l), Character::trivial(&g, l)],
        l,
    )
    .unwrap();
    let ideal = catalog::build_lifted_ideal(
        h.algebra(),
        &TameFamily::I2 {
            m: 1,
            a: Cyc::from_int(l, -1),
        },
    )
    .unwrap();
    let r = catalog::blocks(&ideal).unwrap();
    // |G/N| with N = <g²> counted by hand
    let index = g.order() / 2;
    let ok = r.num_blocks == index && r.equal_blocks && r.total_dim == 2 * r.principal_dim;
    outcome(
        ok,
        format!(
            "{} blocks (|G/N| = {index}), per-degree dims {:?}, dim H = {} = 2 x {}",
            r.num_blocks, r.dims, r.total_dim, r.principal_dim
        ),
    )
}

fn criterion11(positives: &[Positive]) -> Outcome {
    let mut bad = Vec::new();
    for p in positives {
        let h = catalog::hopf_structure(
            &p.group,
            &p.weights,
            vec![p.chars.0.clone(), p.chars.1.clone()],
            p.conductor,
        )
        .expect("allowable");
        let ideal = catalog::build_lifted_ideal(h.algebra(), &p.family).unwrap();
        if !h.g_stability(&ideal, ideal.default_degree_bound()).passed {
            bad.push(p.label.clone());
        }
    }
    outcome(
        bad.is_empty() && !positives.is_empty(),
        format!(
            "g-stable: {}/{} positives",
            positives.len() - bad.len(),
            positives.len()
        ),
    )
}

fn main() {
    let mut positives = Vec::new();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut report = |n: usize, o: Outcome| {
        println!(
            "[{}] criterion {n:>2}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, o));
    };
    report(1, criterion1());
    report(2, criterion2());
    report(3, criterion3());
    report(4, criterion4(&mut positives));
    report(5, criterion5(&mut positives));
    report(6, criterion6(&positives));
    report(7, criterion7(&positives));
    report(8, criterion8());
    report(9, criterion9());
    report(10, criterion10());
    report(11, criterion11(&positives));
    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, o)| !o.passed)
        .map(|(n, _)| *n)
        .collect();
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
