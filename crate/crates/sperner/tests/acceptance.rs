//! End-to-end acceptance suite. Each numbered criterion prints exactly one
//! PASS/FAIL line; the process exits nonzero if any criterion fails.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sperner::cochain::{cohomology_rank, verify_commutation, Cochain};
use sperner::labeling::Labeling;
use sperner::pathfollow::find_fully_labeled_pathfollow;
use sperner::solver::{
    edgewise_witness, in_star, label_from_map, map_from_spec, permitted_labels, ray_exit, solve,
    star_labeling, LabelOutcome, SolverError, StarLabeling,
};
use sperner::subdivision::{barycentric_subdivide, edgewise_subdivide, Scheme};
use sperner::verify::{exhaustive_sperner_labelings, random_sperner_labeling, triple_check};
use sperner::EmbeddedComplex;

const SEEDS_PER_CONFIG: u64 = 1000;

/// Per-labeling facts gathered in one pass over the random corpus and then
/// consumed by several criteria.
struct CorpusEntry {
    e: usize,
    f: usize,
    census_parity: u8,
    chain_parity: u8,
    degree_parity: u8,
    cancellations: usize,
    agree: bool,
    pathfollow_in_bruteforce: bool,
}

fn corpus_configs() -> Vec<(String, EmbeddedComplex)> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let depths: &[usize] = if n <= 2 { &[0, 1, 2] } else { &[0, 1] };
        for &k in depths {
            let mut c = EmbeddedComplex::standard(n);
            for _ in 0..k {
                c = barycentric_subdivide(&c);
            }
            out.push((format!("n={n} barycentric depth {k}"), c));
        }
    }
    out.push(("n=2 edgewise m=3".into(), edgewise_subdivide(2, 3).unwrap()));
    out.push(("n=3 edgewise m=2".into(), edgewise_subdivide(3, 2).unwrap()));
    out
}

fn build_corpus() -> Result<Vec<(String, Vec<CorpusEntry>)>, String> {
    let mut corpus = Vec::new();
    for (name, complex) in &corpus_configs() {
        let entries: Result<Vec<CorpusEntry>, String> = (0..SEEDS_PER_CONFIG)
            .into_par_iter()
            .map(|seed| {
                let labeling = random_sperner_labeling(complex, seed)
                    .map_err(|e| format!("{name} seed {seed}: {e}"))?;
                let report =
                    triple_check(&labeling).map_err(|e| format!("{name} seed {seed}: {e}"))?;
                let walked = find_fully_labeled_pathfollow(&labeling)
                    .map_err(|e| format!("{name} seed {seed}: walk failed: {e}"))?;
                let all = labeling
                    .find_fully_labeled_bruteforce()
                    .map_err(|e| format!("{name} seed {seed}: {e}"))?;
                Ok(CorpusEntry {
                    e: report.e,
                    f: report.f,
                    census_parity: report.census_parity,
                    chain_parity: report.chain_parity,
                    degree_parity: report.degree_parity,
                    cancellations: report.cancellations,
                    agree: report.agree,
                    pathfollow_in_bruteforce: all.contains(&walked),
                })
            })
            .collect();
        corpus.push((name.clone(), entries?));
    }
    Ok(corpus)
}

fn criterion_1(corpus: &[(String, Vec<CorpusEntry>)]) -> Result<String, String> {
    let mut total = 0usize;
    for (name, entries) in corpus {
        total += entries.len();
        if let Some(bad) = entries.iter().position(|r| r.census_parity != 1) {
            return Err(format!("{name} seed {bad}: e = {} is even", entries[bad].e));
        }
    }
    Ok(format!(
        "e odd in all {total} random labelings over {} configurations",
        corpus.len()
    ))
}

fn criterion_2() -> Result<String, String> {
    let mut checked = 0usize;
    let mut run = |name: String, complex: &EmbeddedComplex| -> Result<(), String> {
        let iter = exhaustive_sperner_labelings(complex);
        let expected = iter.total();
        let mut count = 0usize;
        for labeling in iter {
            let report = triple_check(&labeling).map_err(|e| format!("{name}: {e}"))?;
            if report.census_parity != 1 || !report.agree {
                return Err(format!(
                    "{name}: labeling #{count} has e = {} (parities {}/{}/{})",
                    report.e, report.census_parity, report.chain_parity, report.degree_parity
                ));
            }
            count += 1;
        }
        if count != expected {
            return Err(format!("{name}: enumerated {count} of {expected} labelings"));
        }
        checked += count;
        Ok(())
    };
    for m in 1..=4u32 {
        let c = edgewise_subdivide(1, m).map_err(|e| e.to_string())?;
        run(format!("n=1 edgewise m={m}"), &c)?;
    }
    let std2 = EmbeddedComplex::standard(2);
    run("n=2 unsubdivided".into(), &std2)?;
    let bary2 = barycentric_subdivide(&std2);
    run("n=2 barycentric depth 1".into(), &bary2)?;
    Ok(format!("e odd in all {checked} exhaustively enumerated labelings"))
}

fn criterion_3(corpus: &[(String, Vec<CorpusEntry>)]) -> Result<String, String> {
    let mut total = 0usize;
    for (name, entries) in corpus {
        total += entries.len();
        if let Some(bad) = entries.iter().position(|r| {
            !r.agree || r.census_parity != 1 || r.chain_parity != 1 || r.degree_parity != 1
        }) {
            let r = &entries[bad];
            return Err(format!(
                "{name} seed {bad}: parities census/chain/degree = {}/{}/{}",
                r.census_parity, r.chain_parity, r.degree_parity
            ));
        }
    }
    Ok(format!("census, cochain, and degree verdicts agree on all {total} labelings"))
}

fn criterion_4() -> Result<String, String> {
    const PER_DEGREE: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0c);
    let mut squares = 0usize;
    let mut commutes = 0usize;
    let complexes: Vec<(String, EmbeddedComplex)> = vec![
        (
            "n=2 barycentric depth 1".into(),
            barycentric_subdivide(&EmbeddedComplex::standard(2)),
        ),
        ("n=2 edgewise m=2".into(), edgewise_subdivide(2, 2).unwrap()),
        ("n=3 edgewise m=2".into(), edgewise_subdivide(3, 2).unwrap()),
    ];
    for (name, complex) in &complexes {
        let n = complex.dim();
        let random_cochain = |rng: &mut ChaCha8Rng,
                              k: &EmbeddedComplex,
                              d: usize|
         -> Result<Vec<Vec<usize>>, String> {
            let table = k.simplices(d);
            let support: Vec<Vec<usize>> = (0..table.len())
                .filter(|_| rng.gen::<bool>())
                .map(|i| table.get(i).to_vec())
                .collect();
            Ok(support)
        };
        // ∂* ∘ ∂* = 0 on random cochains of every degree
        for d in 0..=n {
            for _ in 0..PER_DEGREE {
                let support = random_cochain(&mut rng, complex, d)?;
                let c = Cochain::from_simplices(complex, d, support)
                    .map_err(|e| format!("{name}: {e}"))?;
                if !c.coboundary().coboundary().is_zero() {
                    return Err(format!("{name}: ∂*∂* ≠ 0 on a degree-{d} cochain"));
                }
                squares += 1;
            }
        }
        // naturality φ*∘∂* = ∂*∘φ* for the simplicial maps of random
        // Sperner labelings, on random cochains of the target
        let target = EmbeddedComplex::standard(n);
        for map_seed in 0..5u64 {
            let labeling = random_sperner_labeling(complex, 0x51e_d0 + map_seed)
                .map_err(|e| format!("{name}: {e}"))?;
            let map = labeling
                .to_simplicial_map(&target)
                .map_err(|e| format!("{name}: {e}"))?;
            for d in 0..=n {
                for _ in 0..PER_DEGREE / 5 {
                    let support = random_cochain(&mut rng, &target, d)?;
                    let c = Cochain::from_simplices(&target, d, support)
                        .map_err(|e| format!("{name}: {e}"))?;
                    let report =
                        verify_commutation(&map, &c).map_err(|e| format!("{name}: {e}"))?;
                    if !report.equal {
                        return Err(format!(
                            "{name}: naturality fails on a degree-{d} cochain (seed {map_seed})"
                        ));
                    }
                    commutes += 1;
                }
            }
        }
    }
    Ok(format!(
        "∂*∂* = 0 on {squares} cochains; naturality on {commutes} pullback instances"
    ))
}

fn criterion_5() -> Result<String, String> {
    let mut checked = 0usize;
    for n in 1..=3usize {
        let subdivisions: Vec<(String, EmbeddedComplex)> = vec![
            (format!("n={n} edgewise m=3"), edgewise_subdivide(n, 3).unwrap()),
            (
                format!("n={n} barycentric depth 1"),
                barycentric_subdivide(&EmbeddedComplex::standard(n)),
            ),
        ];
        for (name, k) in &subdivisions {
            let boundary = k.boundary_subcomplex();
            let relative = cohomology_rank(k, Some(&boundary), n).map_err(|e| e.to_string())?;
            if relative != 1 {
                return Err(format!("{name}: rank H^{n}(Δ', ∂Δ') = {relative}, want 1"));
            }
            let sphere = cohomology_rank(&boundary, None, n - 1).map_err(|e| e.to_string())?;
            if sphere != 1 {
                return Err(format!("{name}: rank H̃^{}(∂Δ') = {sphere}, want 1", n - 1));
            }
            let disk = cohomology_rank(k, None, n - 1).map_err(|e| e.to_string())?;
            if disk != 0 {
                return Err(format!("{name}: rank H̃^{}(Δ') = {disk}, want 0", n - 1));
            }
            checked += 3;
        }
    }
    Ok(format!("{checked} cohomology ranks match (relative 1, sphere 1, disk 0)"))
}

fn criterion_6(corpus: &[(String, Vec<CorpusEntry>)]) -> Result<String, String> {
    let mut total = 0usize;
    for (name, entries) in corpus {
        total += entries.len();
        if let Some(bad) = entries
            .iter()
            .position(|r| r.cancellations != r.f)
        {
            let r = &entries[bad];
            return Err(format!(
                "{name} seed {bad}: {} cancellations but f = {}",
                r.cancellations, r.f
            ));
        }
    }
    Ok(format!("cancellation count equals f on all {total} labelings"))
}

fn criterion_7(corpus: &[(String, Vec<CorpusEntry>)]) -> Result<String, String> {
    let mut total = 0usize;
    for (name, entries) in corpus {
        total += entries.len();
        if let Some(bad) = entries.iter().position(|r| !r.pathfollow_in_bruteforce) {
            return Err(format!(
                "{name} seed {bad}: path-following result not in the brute-force list"
            ));
        }
    }

    // Implicit edgewise walk: only walk-touched vertices ever get labeled,
    // and the returned witness must be genuinely fully labeled.
    let f = map_from_spec("rotate", 2)?;
    let found = edgewise_witness(&f, 256).map_err(|e| e.to_string())?;
    if found.fixed_point_hit {
        return Err("implicit walk reported a premature fixed-point hit".into());
    }
    if found.m != 256 || found.witness.len() != 3 {
        return Err(format!(
            "implicit witness has {} vertices at m={}",
            found.witness.len(),
            found.m
        ));
    }
    let labels: BTreeSet<usize> = found.witness_labels.iter().copied().collect();
    if labels != BTreeSet::from([1, 2, 3]) {
        return Err(format!("implicit witness labels {:?} ≠ {{1,2,3}}", found.witness_labels));
    }
    for (pt, &lab) in found.witness.iter().zip(&found.witness_labels) {
        match label_from_map(&f, pt).map_err(|e| e.to_string())? {
            LabelOutcome::Label(j) if j == lab => {}
            other => {
                return Err(format!(
                    "witness vertex relabels as {other:?}, walk recorded {lab}"
                ))
            }
        }
    }
    Ok(format!(
        "walk ∈ brute-force list on all {total} labelings; implicit m=256 witness re-verified"
    ))
}

fn criterion_8() -> Result<String, String> {
    // A constant map's unique fixed point is the constant itself.
    let c = [0.2, 0.3, 0.5];
    let f = map_from_spec("constant:0.2,0.3,0.5", 2)?;
    let got = solve(&f, 1e-6, Scheme::Edgewise, 24).map_err(|e| e.to_string())?;
    if got.residual > 1e-6 {
        return Err(format!("constant map residual {} > 1e-6", got.residual));
    }
    let err = got
        .point
        .iter()
        .zip(&c)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let diameter = (3.0f64).sqrt() / got.m as f64;
    if err > diameter {
        return Err(format!(
            "constant map: ‖x − c‖∞ = {err:.3e} exceeds the final diameter {diameter:.3e}"
        ));
    }

    // The coordinate rotation fixes exactly the barycenter.
    let f = map_from_spec("rotate", 2)?;
    let got = solve(&f, 1e-3, Scheme::Edgewise, 24).map_err(|e| e.to_string())?;
    let err = got
        .point
        .iter()
        .map(|a| (a - 1.0 / 3.0).abs())
        .fold(0.0f64, f64::max);
    if got.residual > 1e-3 || err > 1e-2 {
        return Err(format!(
            "rotation: residual {:.3e}, distance to barycenter {err:.3e}",
            got.residual
        ));
    }

    // The identity is detected exactly, at the first vertex probed.
    let f = map_from_spec("identity", 2)?;
    let got = solve(&f, 1e-9, Scheme::Edgewise, 24).map_err(|e| e.to_string())?;
    if !got.fixed_point_hit || got.residual != 0.0 {
        return Err(format!(
            "identity: hit = {}, residual = {}",
            got.fixed_point_hit, got.residual
        ));
    }
    Ok("constant, rotation, and identity maps solved within tolerance".into())
}

fn criterion_9() -> Result<String, String> {
    const PAIRS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xab_cd);
    let mut done = 0usize;
    while done < PAIRS {
        let n = 1 + done % 3;
        let n1 = n + 1;
        // random interior point
        let mut x: Vec<f64> = (0..n1).map(|_| rng.gen::<f64>() + 0.01).collect();
        let sx: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= sx);
        // random nonzero displacement inside the Σ = 1 hyperplane; the image
        // x − d is an affine fixed-point-free map's value at x
        let mut d: Vec<f64> = (0..n1).map(|_| rng.gen::<f64>() - 0.5).collect();
        let mean: f64 = d.iter().sum::<f64>() / n1 as f64;
        d.iter_mut().for_each(|v| *v -= mean);
        if d.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-6 {
            continue;
        }
        let fx: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a - b).collect();

        let r = ray_exit(&x, &fx).map_err(|e| format!("pair {done}: {e}"))?;
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(format!("pair {done}: exit point sums to {sum}"));
        }
        if r.iter().any(|&v| v < 0.0) {
            return Err(format!("pair {done}: exit point has a negative coordinate"));
        }
        if !r.iter().any(|&v| v <= 1e-12) {
            return Err(format!("pair {done}: exit point {r:?} is not on ∂Δ"));
        }
        for j in permitted_labels(&x, &fx) {
            if r[j - 1] <= 0.0 {
                return Err(format!("pair {done}: permitted label {j} has zero exit coordinate"));
            }
        }
        done += 1;
    }
    Ok(format!("{PAIRS} random rays exit onto ∂Δ with permitted labels positive"))
}

/// Arc-length parametrization of ∂Δ² (perimeter 3 in edge units):
/// s ∈ [0,1) is the edge v1→v2, [1,2) is v2→v3, [2,3) is v3→v1.
fn boundary_s(x: &[f64]) -> f64 {
    let eps = 1e-9;
    if x[2] <= eps {
        x[1]
    } else if x[0] <= eps {
        1.0 + x[2]
    } else {
        2.0 + x[0]
    }
}

fn boundary_point(s: f64) -> Vec<f64> {
    let s = s.rem_euclid(3.0);
    let t = s - s.floor();
    match s.floor() as usize % 3 {
        0 => vec![1.0 - t, t, 0.0],
        1 => vec![0.0, 1.0 - t, t],
        _ => vec![t, 0.0, 1.0 - t],
    }
}

fn criterion_10() -> Result<String, String> {
    // ∂Δ² ≅ S¹ admits genuinely fixed-point-free continuous self-maps; a
    // rotation by less than one lattice edge keeps every star's image inside
    // a single st(v_j) while the mesh resolves the three corner hand-offs.
    const M: u32 = 16;
    let theta = 1.0 / (4.0 * M as f64);
    let k = edgewise_subdivide(2, M).map_err(|e| e.to_string())?;
    let boundary = k.boundary_subcomplex();
    let rotate = |x: &[f64]| -> Result<Vec<f64>, SolverError> {
        Ok(boundary_point(boundary_s(x) + theta))
    };

    let labeling: Labeling<'_> = match star_labeling(&rotate, &boundary, 16, 42)
        .map_err(|e| e.to_string())?
    {
        StarLabeling::Total(l) => l,
        StarLabeling::Failure { vertex } => {
            return Err(format!("star labeling not total: no label for vertex {vertex}"))
        }
    };
    labeling
        .validate_sperner()
        .map_err(|e| format!("star labeling violates the Sperner condition: {e}"))?;

    // The n+1 open stars st(v_j) have empty mutual intersection: no image --
    // nor any other boundary point -- satisfies all three predicates, and the
    // map moves every probed point.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut probes: Vec<Vec<f64>> = boundary
        .vertex_ids()
        .map(|v| boundary.point(v).to_f64())
        .collect();
    probes.extend((0..1000).map(|_| boundary_point(rng.gen::<f64>() * 3.0)));
    for p in &probes {
        let img = rotate(p).map_err(|e| e.to_string())?;
        if (1..=3).all(|j| in_star(&img, j)) {
            return Err(format!("image {img:?} lies in every st(v_j)"));
        }
        let moved = p
            .iter()
            .zip(&img)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if moved <= 1e-12 {
            return Err(format!("rotation fixes the boundary point {p:?}"));
        }
    }
    Ok(format!(
        "total Sperner-valid star labeling on {} boundary vertices; star predicates never jointly satisfied over {} probes",
        boundary.vertex_ids().count(),
        probes.len()
    ))
}

fn main() {
    let corpus = match build_corpus() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("failed to build the random labeling corpus: {e}");
            std::process::exit(1);
        }
    };

    let criteria: Vec<(&str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        (
            "odd parity of fully labeled simplices on the random corpus",
            Box::new(|| criterion_1(&corpus)),
        ),
        ("exhaustive micro-oracle census", Box::new(criterion_2)),
        (
            "three proof verdicts agree on the random corpus",
            Box::new(|| criterion_3(&corpus)),
        ),
        ("coboundary squares to zero and pullback naturality", Box::new(criterion_4)),
        ("mod-2 cohomology ranks of disk, sphere, and pair", Box::new(criterion_5)),
        (
            "cochain cancellations equal the census f",
            Box::new(|| criterion_6(&corpus)),
        ),
        (
            "path-following finds a member of the brute-force list",
            Box::new(|| criterion_7(&corpus)),
        ),
        ("fixed-point solver meets its tolerances", Box::new(criterion_8)),
        ("ray exits land on ∂Δ with positive permitted labels", Box::new(criterion_9)),
        ("star machinery: total, Sperner-valid, stars jointly empty", Box::new(criterion_10)),
    ];

    let mut failures = 0usize;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:2} ({name}): PASS — {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:2} ({name}): FAIL — {detail}", i + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criterion(s) failed");
        std::process::exit(1);
    }
}
