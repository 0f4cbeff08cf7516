//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p lpa-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use lpa_cli::{run, EXIT_OK, EXIT_PRECONDITION, EXIT_VERIFICATION};
use lpa_core::gmatrix::{BaseRing, GradedMatrix};
use lpa_core::lpa::Degree;
use lpa_core::regularity::{bgr_enumerate, graded_inner_inverse, idempotent_report, type_i_witness};
use lpa_core::sample::Sampler;
use lpa_core::structure::{
    classify, decompose, dim_series_check, phi, phi_inverse_basis, pull_back, verify_phi, BlockKind, BlockTuple,
    DecompositionReport, PhiMap,
};
use lpa_core::{corpus, Field, Graph, LeavittPathAlgebra, LpaElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Time budget for criterion 1 (release or debug build alike).
const DIMS_BUDGET: Duration = Duration::from_secs(5);
/// Dimension series range `|n| ≤ N`.
const DIMS_N: u32 = 10;
/// Round-trip degree range for basis monomials.
const ROUND_TRIP_DEGREE: i64 = 6;
/// Cycle-power range used for the matrix-unit round trip.
const ROUND_TRIP_POWERS: i64 = 3;
const MULTIPLICATIVITY_PAIRS: usize = 500;
const ASSOCIATIVITY_TRIPLES: usize = 1000;
const REGULARITY_SAMPLES: usize = 100;
/// Degree range of random elements.
const SAMPLE_DEGREE: u32 = 6;
/// Path-length cap for sampling on graphs where a cycle has an exit.
const EXIT_PATH_CAP: usize = 4;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn algebra(name: &str, field: Field) -> LeavittPathAlgebra {
    LeavittPathAlgebra::new(corpus::get(name).expect("corpus graph"), field)
}

fn decomposed(alg: &LeavittPathAlgebra) -> (DecompositionReport, PhiMap) {
    let d = decompose(alg).expect("no-exit graph decomposes");
    let map = phi(alg, &d).expect("generator images");
    (d, map)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Writes a corpus graph to a temporary file for CLI runs.
struct GraphFile {
    _dir: tempfile::TempDir,
    path: PathBuf,
}

fn graph_file(name: &str) -> GraphFile {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join(format!("{name}.json"));
    let g = corpus::get(name).expect("corpus graph");
    std::fs::write(&path, serde_json::to_string(&g.to_spec()).expect("spec serializes")).expect("write graph");
    GraphFile { _dir: dir, path }
}

fn cli(command: &str, file: &GraphFile, extra: &[&str]) -> lpa_cli::Outcome {
    let mut args = vec!["lpa".to_owned(), command.to_owned(), "--input".to_owned()];
    args.push(file.path.to_string_lossy().into_owned());
    args.extend(extra.iter().map(|s| s.to_string()));
    run(args)
}

/// Closed-form graded dimensions straight from the path sets: pairs of
/// sink paths with the right length difference, and triples `(q_i, q_j, k)`
/// with `|q_i| − |q_j| + k·t = n` for each cycle.
fn path_count_dim(g: &Graph, n: i64) -> usize {
    let mut total = 0;
    for v in g.sinks() {
        let lens: Vec<i64> = g.paths_into(v, None).unwrap().iter().map(|p| p.len() as i64).collect();
        total += lens.iter().flat_map(|a| lens.iter().map(move |b| a - b)).filter(|&d| d == n).count();
    }
    for c in g.simple_cycles() {
        let t = c.len() as i64;
        let lens: Vec<i64> = g.paths_into_cycle(&c, None).unwrap().iter().map(|p| p.len() as i64).collect();
        total += lens
            .iter()
            .flat_map(|a| lens.iter().map(move |b| n - (a - b)))
            .filter(|r| r.rem_euclid(t) == 0)
            .count();
    }
    total
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let table = dim_series_check(&alg, DIMS_N).map_err(|e| format!("{name}: {e}"))?;
        for r in &table.rows {
            let oracle = path_count_dim(alg.graph(), r.degree);
            ensure(r.algebra == r.blocks && r.blocks == oracle, || {
                format!("{name} degree {}: lpa {} blocks {} paths {oracle}", r.degree, r.algebra, r.blocks)
            })?;
            rows += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < DIMS_BUDGET, || format!("took {elapsed:.2?}, budget {DIMS_BUDGET:?}"))?;
    Ok(format!("{rows} rows over {} graphs equal, {elapsed:.2?}", corpus::NO_EXIT.len()))
}

fn criterion_2() -> Outcome {
    let mut instances = 0;
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let (d, map) = decomposed(&alg);
        let report = verify_phi(alg.graph(), &d, &map);
        ensure(report.all_passed(), || {
            let f: Vec<String> = report.failures().map(|c| format!("{} {}", c.relation, c.instance)).collect();
            format!("{name}: {}", f.join(", "))
        })?;
        instances += report.checks.len();
        let out = cli("verify-iso", &graph_file(name), &[]);
        ensure(out.code == EXIT_OK, || format!("{name}: verify-iso exit {}", out.code))?;
    }
    Ok(format!("{instances} relation instances pass, verify-iso exits 0"))
}

fn criterion_3() -> Outcome {
    let (mut units, mut monomials) = (0, 0);
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let (d, map) = decomposed(&alg);
        for (b, block) in d.blocks().iter().enumerate() {
            let powers = match block.kind() {
                BlockKind::Sink(_) => 0..=0,
                BlockKind::Cycle(_) => -ROUND_TRIP_POWERS..=ROUND_TRIP_POWERS,
            };
            for i in 0..block.size() {
                for j in 0..block.size() {
                    for w in powers.clone() {
                        let pre = phi_inverse_basis(&alg, &d, b, i, j, w).map_err(|e| e.to_string())?;
                        let unit = d.unit_tuple(b, i, j, w).map_err(|e| e.to_string())?;
                        ensure(map.apply(&d, &pre) == unit, || format!("{name}: block {b} unit ({i},{j}) x^{w}"))?;
                        units += 1;
                    }
                }
            }
        }
        for n in -ROUND_TRIP_DEGREE..=ROUND_TRIP_DEGREE {
            for m in alg.basis_of_degree(n, None).map_err(|e| e.to_string())? {
                let a = alg.monomial(m.clone());
                let back = pull_back(&alg, &d, &map.apply(&d, &a)).map_err(|e| e.to_string())?;
                ensure(back == a, || format!("{name}: {} does not round-trip", m.display(alg.graph())))?;
                monomials += 1;
            }
        }
    }
    Ok(format!("{units} matrix units and {monomials} basis monomials round-trip"))
}

fn criterion_4() -> Outcome {
    let field = Field::prime(10007).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for name in corpus::NO_EXIT {
        let alg = algebra(name, field);
        let (d, map) = decomposed(&alg);
        let s = Sampler::new(&alg, SAMPLE_DEGREE, None).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for k in 0..MULTIPLICATIVITY_PAIRS {
            let (a, b) = (s.homogeneous(&mut rng, 4), s.homogeneous(&mut rng, 4));
            let lhs = map.apply(&d, &alg.mul(&a, &b));
            let rhs = map.apply(&d, &a).mul(&map.apply(&d, &b));
            ensure(lhs == rhs, || format!("{name}: pair {k}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs over F_10007, zero failures"))
}

fn criterion_5() -> Outcome {
    let mut triples = 0;
    for name in corpus::names() {
        let alg = algebra(name, Field::Rational);
        let cap = (!alg.graph().no_exit_condition()).then_some(EXIT_PATH_CAP);
        let s = Sampler::new(&alg, 4, cap).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let stable = |x: &LpaElement| {
            let raw = x.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
            alg.normal_form(raw).map(|y| y == *x).unwrap_or(false)
        };
        for k in 0..ASSOCIATIVITY_TRIPLES {
            let [a, b, c] = [0, 1, 2].map(|_| alg.monomial(s.monomial(&mut rng)));
            let ab = alg.mul(&a, &b);
            let bc = alg.mul(&b, &c);
            let left = alg.mul(&ab, &c);
            let right = alg.mul(&a, &bc);
            ensure(left == right, || format!("{name}: triple {k} not associative"))?;
            ensure([&ab, &bc, &left].into_iter().all(stable), || format!("{name}: triple {k} normal form moved"))?;
            triples += 1;
        }
    }
    Ok(format!("{triples} monomial triples associative, normal forms stable"))
}

/// Shared samples for criteria 6 and 7.
fn regularity_samples(alg: &LeavittPathAlgebra) -> Result<Vec<LpaElement>, String> {
    let s = Sampler::new(alg, SAMPLE_DEGREE, None).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    Ok((0..REGULARITY_SAMPLES).map(|_| s.homogeneous(&mut rng, 4)).collect())
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let (d, map) = decomposed(&alg);
        for (k, a) in regularity_samples(&alg)?.iter().enumerate() {
            ensure(!a.is_zero(), || format!("{name}: sample {k} is zero"))?;
            let lambda = a.degree().value().ok_or_else(|| format!("{name}: sample {k} inhomogeneous"))?;
            let inv = graded_inner_inverse(&alg, &d, &map, a).map_err(|e| format!("{name}: {e}"))?;
            ensure(alg.mul_all([a, &inv.b, a]) == *a, || format!("{name}: sample {k}: aba ≠ a"))?;
            ensure(inv.b.degree() == Degree::Homogeneous(-lambda), || {
                format!("{name}: sample {k}: deg b = {:?}, expected {}", inv.b.degree(), -lambda)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} homogeneous elements, aba = a and deg b = -deg a"))
}

/// For the same samples: the computed inverse, and a deliberately
/// inhomogeneous inner inverse `b + y − b·a·y·a·b` with `y` of another
/// degree, both project to inner inverses in degree `−λ`.
fn criterion_7() -> Outcome {
    let (mut count, mut nontrivial) = (0, 0);
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let (d, map) = decomposed(&alg);
        let s = Sampler::new(&alg, SAMPLE_DEGREE, None).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
        for (k, a) in regularity_samples(&alg)?.iter().enumerate() {
            let lambda = a.degree().value().ok_or_else(|| format!("{name}: sample {k} inhomogeneous"))?;
            let inv = graded_inner_inverse(&alg, &d, &map, a).map_err(|e| format!("{name}: {e}"))?;
            let b = &inv.unprojected;
            let other = if lambda == 0 { 1 } else { 0 };
            let y = s.homogeneous_of_degree(&mut rng, other, 3);
            let perturbed = b.clone() + y.clone() - alg.mul_all([b, a, &y, a, b]);
            for (label, c) in [("computed", b), ("perturbed", &perturbed)] {
                ensure(alg.mul_all([a, c, a]) == *a, || format!("{name}: sample {k}: {label} inverse fails"))?;
                let projected = c.component(-lambda);
                ensure(alg.mul_all([a, &projected, a]) == *a, || {
                    format!("{name}: sample {k}: {label} projection fails")
                })?;
                if projected != *c {
                    nontrivial += 1;
                }
                count += 1;
            }
        }
    }
    ensure(nontrivial > 0, || "no inhomogeneous inverse was exercised".into())?;
    Ok(format!("{count} inner inverses project to inner inverses ({nontrivial} inhomogeneous before projection)"))
}

fn criterion_8() -> Outcome {
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let (d, map) = decomposed(&alg);
        let w = type_i_witness(&alg, &d).map_err(|e| e.to_string())?;
        let r = idempotent_report(&alg, &d, &map, &w).map_err(|e| e.to_string())?;
        let t = r.types.as_ref().ok_or_else(|| format!("{name}: witness not idempotent"))?;
        ensure(r.is_idempotent && r.is_homogeneous_deg0 && t.abelian && t.faithful, || {
            format!("{name}: witness report {r:?}")
        })?;
        let c = classify(&alg).map_err(|e| e.to_string())?;
        ensure(c.flags_agree() && c.gr_type_i, || format!("{name}: flags {c:?}"))?;
        let triple = c.central_triple.as_ref().ok_or_else(|| format!("{name}: no central triple"))?;
        ensure(
            triple.type_i == alg.identity() && triple.type_ii.is_zero() && triple.type_iii.is_zero(),
            || format!("{name}: central triple is not (1, 0, 0)"),
        )?;
    }
    Ok(format!("{} graphs: witness abelian and faithful, flags equal, triple (1, 0, 0)", corpus::NO_EXIT.len()))
}

fn criterion_9() -> Outcome {
    for name in corpus::WITH_EXIT {
        let alg = algebra(name, Field::Rational);
        let c = classify(&alg).map_err(|e| e.to_string())?;
        ensure(!c.gr_type_i && !c.graded_self_injective && !c.no_exit && !c.sigma_v, || {
            format!("{name}: flags {c:?}")
        })?;
        let file = graph_file(name);
        let out = cli("decompose", &file, &[]);
        ensure(out.code == EXIT_PRECONDITION && out.stdout.is_empty(), || {
            format!("{name}: decompose exit {}", out.code)
        })?;
        let out = cli("classify", &file, &[]);
        ensure(out.code == EXIT_OK && out.stdout.contains("\"gr_type_I\": false"), || {
            format!("{name}: classify exit {}", out.code)
        })?;
    }
    let mut caught = 0;
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let (d, mut map) = decomposed(&alg);
        let Some(e) = alg.graph().edge_ids().next() else { continue };
        map.edges[e.0] = d.zero_tuple();
        map.ghosts[e.0] = d.zero_tuple();
        ensure(!verify_phi(alg.graph(), &d, &map).all_passed(), || format!("{name}: corruption missed"))?;
        let edge = alg.graph().edge_name(e).to_owned();
        let out = cli("verify-iso", &graph_file(name), &["--corrupt-edge", &edge]);
        ensure(out.code == EXIT_VERIFICATION, || format!("{name}: corrupted verify-iso exit {}", out.code))?;
        caught += 1;
    }
    Ok(format!("toeplitz and rose2 negative, decompose exits 2; {caught} corrupted maps caught (exit 3)"))
}

/// All degree-0 elements of the block product over a finite field.
fn degree_zero_elements(d: &DecompositionReport) -> Vec<BlockTuple> {
    let field = d.field();
    let scalars: Vec<_> = field.elements().expect("finite field").collect();
    // (block, i, j, exponent) for each degree-0 matrix unit
    let mut units = Vec::new();
    for (b, block) in d.blocks().iter().enumerate() {
        let s = block.shifts();
        for i in 0..s.len() {
            for j in 0..s.len() {
                let e = s[j] - s[i];
                let ok = match block.algebra().base() {
                    BaseRing::Field => e == 0,
                    BaseRing::Laurent { step } => e.rem_euclid(step as i64) == 0,
                };
                if ok {
                    units.push((b, i, j, e));
                }
            }
        }
    }
    let q = scalars.len();
    let total = q.pow(units.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut x = d.zero_tuple();
            for &(b, i, j, e) in &units {
                let c = scalars[code % q].clone();
                code /= q;
                if !c.is_zero() {
                    let alg = d.block(b).algebra();
                    let unit: GradedMatrix = alg.unit(i, j, alg.base_element(c, e).unwrap()).unwrap();
                    x.0[b] = x.0[b].add(&unit).unwrap();
                }
            }
            x
        })
        .collect()
}

fn criterion_10() -> Outcome {
    let f5 = Field::prime(5).map_err(|e| e.to_string())?;
    let mut checked = Vec::new();
    for name in corpus::NO_EXIT {
        let alg = algebra(name, f5);
        let (d, map) = decomposed(&alg);
        if d.blocks().len() > 2 || d.blocks().iter().any(|b| b.size() > 3) {
            continue;
        }
        let generators: Vec<&BlockTuple> = map.vertices.iter().chain(&map.edges).chain(&map.ghosts).collect();
        let mut found: Vec<BlockTuple> = degree_zero_elements(&d)
            .into_iter()
            .filter(|e| e.mul(e) == *e && generators.iter().all(|g| e.mul(g) == g.mul(e)))
            .collect();
        let mut expected: Vec<BlockTuple> = bgr_enumerate(&d).iter().map(|v| v.to_tuple(&d)).collect();
        let key = |t: &BlockTuple| t.to_json().to_string();
        found.sort_by_key(key);
        expected.sort_by_key(key);
        ensure(found == expected, || format!("{name}: found {} central idempotents, expected {}", found.len(), expected.len()))?;
        checked.push(format!("{name}:{}", found.len()));
    }
    ensure(!checked.is_empty(), || "no eligible graphs".into())?;
    Ok(format!("exhaustive over F_5 matches 2^#blocks ({})", checked.join(" ")))
}

fn criterion_11() -> Outcome {
    let mut units = 0;
    for name in corpus::NO_EXIT {
        let alg = algebra(name, Field::Rational);
        let d = decompose(&alg).map_err(|e| e.to_string())?;
        for (b, block) in d.blocks().iter().enumerate() {
            let ga = block.algebra();
            let exponents: Vec<i64> = match ga.base() {
                BaseRing::Field => vec![0],
                BaseRing::Laurent { step } => (-2..=2).map(|k| k * step as i64).collect(),
            };
            for i in 0..ga.size() {
                for j in 0..ga.size() {
                    for &e in &exponents {
                        let x = ga.base_element(alg.field().from_i64(3), e).unwrap();
                        let deg = ga.unit_degree(i, j, &x).map_err(|e| e.to_string())?;
                        let m = ga.unit(i, j, x).unwrap();
                        ensure(m.is_homogeneous(deg) && !m.is_homogeneous(deg + 1) && !m.is_homogeneous(deg - 1), || {
                            format!("{name}: block {b} unit ({i},{j}) x^{e} degree {deg}")
                        })?;
                        units += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{units} matrix units agree"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("dimension series", criterion_1),
        ("relation verification", criterion_2),
        ("round trip", criterion_3),
        ("multiplicativity", criterion_4),
        ("associativity and normal forms", criterion_5),
        ("graded regularity", criterion_6),
        ("projection of inner inverses", criterion_7),
        ("type I witness and classification", criterion_8),
        ("negative controls", criterion_9),
        ("central idempotents by brute force", criterion_10),
        ("matrix unit degrees", criterion_11),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
