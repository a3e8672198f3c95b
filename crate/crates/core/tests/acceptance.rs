//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any criterion fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tate::adeles::adelic_cohomology;
use tate::diagram::hom::{hom_ind, reconstruct, straighten};
use tate::kernel::{Field, LaurentPoly, Poly};
use tate::lattice::random::{lower_bound_candidate, random_lattice, upper_bound_candidate};
use tate::lattice::{index_bundle, quotient_dims, split_tate, Lattice};
use tate::linalg::FieldMatrix;
use tate::places::{enumerate_places, residue, Place, RatFunc};
use tate::tate2::{quotient2_descriptor, Layer, Staircase2};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- 1

fn riemann_roch() -> Check {
    for q in [2u64, 3, 5] {
        let f = Field::gf(q).unwrap();
        for d in -4i64..=6 {
            let n = d.unsigned_abs() as usize + 2;
            let c = adelic_cohomology(&f, d, 1, n).map_err(|e| format!("q={q} d={d}: {e}"))?;
            // monomial bases: x^k (0 <= k <= d) for H^0, x^-k (1 <= k <= -d-1) for H^1
            let h0 = (0..=d).count();
            let h1 = (1..=(-d - 1)).count();
            ensure!(c.stable, "q={q} d={d}: not stable");
            ensure!((c.h0, c.h1) == (h0, h1), "q={q} d={d}: got ({}, {}), expected ({h0}, {h1})", c.h0, c.h1);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 2

fn random_rational<R: Rng>(rng: &mut R, f: &Field) -> RatFunc {
    loop {
        let num = Poly::new(f, (0..=rng.gen_range(0..=5)).map(|_| f.random(rng)).collect());
        let dd = rng.gen_range(1..=4);
        let mut den: Vec<_> = (0..dd).map(|_| f.random(rng)).collect();
        den.push(f.one());
        if !num.is_zero() {
            return RatFunc::new(num, Poly::new(f, den)).unwrap();
        }
    }
}

fn residue_theorem() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in [2u64, 3] {
        let f = Field::prime(q).unwrap();
        let places = enumerate_places(&f, 4).unwrap();
        for trial in 0..50 {
            let (a, b) = (random_rational(&mut rng, &f), random_rational(&mut rng, &f));
            for den in [a.den(), b.den()] {
                let mut rest = den.clone();
                for p in &places {
                    if let Place::Finite(pi) = p {
                        rest = rest.split_power(pi).1;
                    }
                }
                ensure!(rest.degree() == Some(0), "q={q} trial {trial}: pole of {den} not covered");
            }
            let mut sum = f.zero();
            for p in &places {
                sum = f.add(&sum, &residue(&a, &b, p).map_err(|e| e.to_string())?);
            }
            ensure!(f.is_zero(&sum), "q={q} trial {trial}: residues of ({a}) d({b}) sum to {}", f.format(&sum));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 3

fn directedness() -> Check {
    let f = Field::prime(2).unwrap();
    for n in 1..=4usize {
        let mut rng = ChaCha8Rng::seed_from_u64(300 + n as u64);
        for trial in 0..200 {
            let l0 = random_lattice(&mut rng, &f, n);
            let l1 = random_lattice(&mut rng, &f, n);
            let meet = l0.meet(&l1).map_err(|e| e.to_string())?;
            let join = l0.join(&l1).map_err(|e| e.to_string())?;
            ensure!(leq_oracle(&meet, &l0) && leq_oracle(&meet, &l1), "n={n} trial {trial}: meet is not a lower bound");
            ensure!(leq_oracle(&l0, &join) && leq_oracle(&l1, &join), "n={n} trial {trial}: join is not an upper bound");
            for _ in 0..50 {
                let r = random_lattice(&mut rng, &f, n);
                let lo = lower_bound_candidate(&r, &[&l0, &l1]);
                ensure!(leq_oracle(&lo, &l0) && leq_oracle(&lo, &l1), "candidate generator broke");
                ensure!(leq_oracle(&lo, &meet), "n={n} trial {trial}: a lower bound is not below the meet");
                let hi = upper_bound_candidate(&r, &[&l0, &l1]);
                ensure!(leq_oracle(&l0, &hi) && leq_oracle(&l1, &hi), "candidate generator broke");
                ensure!(leq_oracle(&join, &hi), "n={n} trial {trial}: an upper bound is not above the join");
            }
            for (sub, sup) in [(&meet, &l0), (&meet, &l1), (&l0, &join), (&l1, &join), (&meet, &join)] {
                let dims = quotient_dims(sub, sup).map_err(|e| format!("n={n} trial {trial}: {e}"))?;
                let total: u64 = dims.iter().sum();
                ensure!(
                    total as i64 == lattice_det_val(sub) - lattice_det_val(sup),
                    "n={n} trial {trial}: quotient length {total} disagrees with determinants"
                );
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 4

fn index_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..200 {
        let q = [2u64, 3][trial % 2];
        let f = Field::prime(q).unwrap();
        let n = rng.gen_range(1..=4);
        let mut lats = Vec::new();
        let mut vals = Vec::new();
        while lats.len() < 3 {
            let raw = raw_basis(&mut rng, &f, n, 3, -2, 3);
            let det = leibniz_det(&f, &raw);
            let Some(v) = det.val() else { continue };
            let Some(l) = lattice_of(&f, &raw) else { continue };
            lats.push(l);
            vals.push(v);
        }
        let net = |a: usize, b: usize| index_bundle(&lats[a], &lats[b]).map(|x| x.net).map_err(|e| e.to_string());
        ensure!(net(0, 1)? == vals[1] - vals[0], "trial {trial}: net disagrees with det valuation");
        ensure!(net(0, 2)? == net(0, 1)? + net(1, 2)?, "trial {trial}: cocycle identity fails");
    }
    Ok(())
}

// ---------------------------------------------------------------- 5

struct WindowCase {
    lattice: Lattice,
    image: Span2,
}

fn compare_in_window(w: i64, n: usize, a: &WindowCase, b: &WindowCase) -> Check {
    let (la, lb) = (&a.lattice, &b.lattice);
    let meet = la.meet(lb).map_err(|e| e.to_string())?;
    let join = la.join(lb).map_err(|e| e.to_string())?;
    let img = |l: &Lattice| window_image(w, l.basis().columns()).ok_or("lattice leaves the window".to_string());
    let (im_meet, im_join) = (img(&meet)?, img(&join)?);
    let sum = a.image.sum(&b.image);
    ensure!(im_join.same(&sum), "join image differs from the sum of images");
    ensure!(
        a.image.contains_span(&im_meet) && b.image.contains_span(&im_meet) && im_meet.dim() == a.image.intersection_dim(&b.image),
        "meet image differs from the intersection of images"
    );
    for (sub, sup, isub, isup) in [(&meet, la, &im_meet, &a.image), (lb, &join, &b.image, &im_join)] {
        let lib = quotient_dims(sub, sup).map_err(|e| e.to_string())?;
        ensure!(lib == quotient_type(w, n, isub, isup), "quotient dims {lib:?} disagree with the window");
    }
    let ib = index_bundle(la, lb).map_err(|e| e.to_string())?;
    let inter = a.image.intersection_dim(&b.image);
    ensure!(
        ib.pos as usize == a.image.dim() - inter && ib.neg as usize == b.image.dim() - inter,
        "index bundle ({}, {}) disagrees with the window",
        ib.pos,
        ib.neg
    );
    Ok(())
}

fn window_oracle() -> Check {
    let f = Field::prime(2).unwrap();
    for n in 1..=2usize {
        for w in 1..=4i64 {
            // every diagonal monomial lattice inside the window
            let mut cases = Vec::new();
            let total = (2 * w + 1).pow(n as u32);
            for code in 0..total {
                let exps: Vec<i64> = (0..n).map(|i| (code / (2 * w + 1).pow(i as u32)) % (2 * w + 1) - w).collect();
                let rows: Vec<Vec<LaurentPoly>> = (0..n)
                    .map(|i| (0..n).map(|j| if i == j { LaurentPoly::t_pow(&f, exps[i]) } else { LaurentPoly::zero(&f) }).collect())
                    .collect();
                let image = window_image(w, &columns_of(&rows)).unwrap();
                let lattice = lattice_of(&f, &rows).unwrap();
                cases.push(WindowCase { lattice, image });
            }
            for a in &cases {
                for b in &cases {
                    compare_in_window(w, n, a, b).map_err(|e| format!("n={n} w={w} monomial: {e}"))?;
                }
            }
        }
        // random lattices that fit a window of size 4
        let w = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(5 + n as u64);
        let mut random = Vec::new();
        while random.len() < 100 {
            let rows = raw_basis(&mut rng, &f, n, 2, -1, 2);
            let Some(v) = leibniz_det(&f, &rows).val() else { continue };
            let Some(image) = window_image(w, &columns_of(&rows)) else { continue };
            // the window sees the whole lattice iff it contains t^w k[[t]]^n
            if image.dim() as i64 != n as i64 * w - v {
                continue;
            }
            let lattice = lattice_of(&f, &rows).unwrap();
            ensure!(window_image(w, lattice.basis().columns()).is_some_and(|i| i.same(&image)), "canonical basis changed the lattice");
            random.push(WindowCase { lattice, image });
        }
        for (i, a) in random.iter().enumerate() {
            let b = &random[(i + 1) % random.len()];
            compare_in_window(w, n, a, b).map_err(|e| format!("n={n} random pair {i}: {e}"))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 6

fn diagram_layer() -> Check {
    let f = Field::prime(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let diagrams: Vec<SubspaceDiagram> =
        (0..18).map(|k| random_subspace_diagram(&mut rng, 1 + k % 6, 1 + (k / 6) % 3)).collect();
    for (a, x) in diagrams.iter().enumerate() {
        for (b, y) in diagrams.iter().enumerate() {
            let tag = format!("pair ({a}, {b})");
            let space = hom_ind(&x.diagram, &y.diagram).map_err(|e| format!("{tag}: {e}"))?;
            let (cx, cy) = (x.colimit_dim(), y.colimit_dim());
            ensure!(space.dim() == cx * cy, "{tag}: hom has dimension {}, expected {}", space.dim(), cx * cy);
            let real = space.realization_matrix();
            ensure!(rank(&f, &(0..real.cols()).map(|j| real.column(j)).collect::<Vec<_>>()) == space.dim(), "{tag}: realization is not injective");
            let mut elements = space.basis_elements();
            for _ in 0..2 {
                let coords: Vec<_> = (0..space.dim()).map(|_| f.random(&mut rng)).collect();
                elements.push(space.element(&coords).map_err(|e| e.to_string())?);
            }
            for h in &elements {
                let s = straighten(&space, h).map_err(|e| format!("{tag}: {e}"))?;
                ensure!(s.final_to_source && s.final_to_target && s.directed, "{tag}: straightening is not a directed final diagram");
                ensure!(reconstruct(&space, &s).map_err(|e| e.to_string())? == *h, "{tag}: round trip changed the element");
                ensure!(s.realize(&space) == Some(space.realize(h)), "{tag}: straightened map realizes differently");
            }
            // every map of realizations comes from a hom element
            let u = FieldMatrix::from_rows(&f, (0..cy).map(|_| (0..cx).map(|_| f.random(&mut rng)).collect()).collect());
            if cx > 0 && cy > 0 {
                let h = space.from_realization(&u).ok_or(format!("{tag}: map of realizations not hit"))?;
                ensure!(space.realize(&h) == u, "{tag}: realization mismatch");
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 7

fn splitting() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..100 {
        let q = [2u64, 3, 4][trial % 3];
        let f = Field::gf(q).unwrap();
        let n = rng.gen_range(1..=3);
        let l = random_lattice(&mut rng, &f, n);
        let w = l.conductor().max(-l.floor()).max(1) + rng.gen_range(0..=1);
        let s = split_tate(&l, w).map_err(|e| format!("trial {trial}: {e}"))?;
        let dim = s.inclusion.rows();
        ensure!(dim == 2 * w as usize * n, "trial {trial}: window has the wrong dimension");
        ensure!(s.inclusion.cols() as i64 == n as i64 * w - lattice_det_val(&l), "trial {trial}: lattice part has the wrong dimension");
        ensure!(is_identity(&f, &matmul(&f, &s.retraction, &s.inclusion)), "trial {trial}: r i != 1");
        ensure!(is_identity(&f, &matmul(&f, &s.projection, &s.section)), "trial {trial}: p s != 1");
        ensure!(is_zero(&f, &matmul(&f, &s.retraction, &s.section)), "trial {trial}: r s != 0");
        ensure!(is_zero(&f, &matmul(&f, &s.projection, &s.inclusion)), "trial {trial}: p i != 0");
        let ir = matmul(&f, &s.inclusion, &s.retraction);
        let sp = matmul(&f, &s.section, &s.projection);
        let total: Vec<Vec<_>> = ir.iter().zip(&sp).map(|(a, b)| a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()).collect();
        ensure!(is_identity(&f, &total), "trial {trial}: i r + s p != 1");
    }
    Ok(())
}

// ---------------------------------------------------------------- 8

const J_LO: i64 = -3;
const J_HI: i64 = 3;

/// Position of a layer in the chain `0 < t1^2 O < ... < t1^-2 O < everything`.
fn layer_rank(l: Layer) -> Option<u8> {
    match l {
        Layer::Zero => Some(0),
        Layer::Lat(a) if (-2..=2).contains(&a) => Some((3 - a) as u8),
        Layer::Full => Some(6),
        Layer::Lat(_) => None,
    }
}

fn layer_of_rank(r: u8) -> Layer {
    match r {
        0 => Layer::Zero,
        6 => Layer::Full,
        k => Layer::Lat(3 - k as i64),
    }
}

fn profile(s: &Staircase2) -> Option<Vec<u8>> {
    if s.layer(J_LO - 1) != Layer::Zero || s.layer(J_HI + 1) != Layer::Full {
        return None;
    }
    (J_LO..=J_HI).map(|j| layer_rank(s.layer(j))).collect()
}

fn all_profiles(len: usize, min: u8, out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for r in min..=6 {
        cur.push(r);
        all_profiles(len, r, out, cur);
        cur.pop();
    }
}

fn two_tate() -> Check {
    let mut profiles = Vec::new();
    all_profiles((J_HI - J_LO + 1) as usize, 0, &mut profiles, &mut Vec::new());
    let stairs: Vec<Staircase2> = profiles
        .iter()
        .map(|p| Staircase2::from_layers(J_LO, &p.iter().map(|&r| layer_of_rank(r)).collect::<Vec<_>>()).unwrap())
        .collect();
    let index: HashMap<Vec<u8>, usize> = profiles.iter().cloned().zip(0..).collect();
    let count = profiles.len();
    let words = count.div_ceil(64);
    let leq = |a: &[u8], b: &[u8]| a.iter().zip(b).all(|(x, y)| x <= y);
    // down-sets and up-sets of every staircase
    let mut down = vec![vec![0u64; words]; count];
    let mut up = vec![vec![0u64; words]; count];
    for (a, pa) in profiles.iter().enumerate() {
        for (b, pb) in profiles.iter().enumerate() {
            if leq(pa, pb) {
                down[b][a / 64] |= 1 << (a % 64);
                up[a][b / 64] |= 1 << (b % 64);
            }
        }
    }
    let and = |x: &[u64], y: &[u64]| x.iter().zip(y).map(|(a, b)| a & b).collect::<Vec<_>>();
    for a in 0..count {
        for b in 0..count {
            let m = profile(&stairs[a].meet(&stairs[b])).ok_or("meet leaves the range")?;
            let j = profile(&stairs[a].join(&stairs[b])).ok_or("join leaves the range")?;
            let (m, j) = (index[&m], index[&j]);
            ensure!(down[m] == and(&down[a], &down[b]), "meet of {a} and {b} is not the greatest lower bound");
            ensure!(up[j] == and(&up[a], &up[b]), "join of {a} and {b} is not the least upper bound");
            ensure!(stairs[a].leq(&stairs[b]) == leq(&profiles[a], &profiles[b]), "order disagrees on ({a}, {b})");
            if leq(&profiles[a], &profiles[b]) {
                let layers = quotient2_descriptor(&stairs[a], &stairs[b]).map_err(|e| e.to_string())?;
                let expected: Vec<i64> =
                    (J_LO..=J_HI).filter(|&j| profiles[a][(j - J_LO) as usize] != profiles[b][(j - J_LO) as usize]).collect();
                ensure!(layers.iter().map(|(j, _)| *j).collect::<Vec<_>>() == expected, "quotient ({a}, {b}) lists the wrong layers");
                for (j, d) in &layers {
                    let (lo, hi) = (stairs[a].layer(*j), stairs[b].layer(*j));
                    let ok = match (lo, hi) {
                        (Layer::Lat(x), Layer::Lat(y)) => d.finite_dim == (x - y) as u64 && !d.pro && !d.ind,
                        (Layer::Zero, Layer::Lat(_)) => d.pro && !d.ind && d.finite_dim == 0,
                        (Layer::Lat(_), Layer::Full) => d.ind && !d.pro && d.finite_dim == 0,
                        (Layer::Zero, Layer::Full) => d.pro && d.ind,
                        _ => false,
                    };
                    ensure!(ok && !d.is_zero(), "quotient ({a}, {b}) layer {j}: descriptor {d:?} for {lo:?} / {hi:?}");
                }
            }
        }
    }
    ensure!(count == 1716, "enumerated {count} staircases");
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("riemann-roch via adelic cohomology", riemann_roch),
        ("sum of residues vanishes", residue_theorem),
        ("lattice poset is directed both ways", directedness),
        ("index equals determinant valuation, cocycle", index_identities),
        ("window oracle agrees", window_oracle),
        ("straightening and hom of realizations", diagram_layer),
        ("tate splittings on windows", splitting),
        ("exhaustive 2-tate staircases", two_tate),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", k + 1);
        if !only.is_empty() && !only.iter().any(|o| label.contains(o.as_str()) || name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("{label} [{name}]: PASS ({secs:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("{label} [{name}]: FAIL ({secs:.2}s): {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
