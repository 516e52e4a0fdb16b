//! Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lpa_core::algebra::{is_zero_syntactic, multiply, normal_form, Generator};
use lpa_core::branching::{
    build_interval_system, build_rotation_system, check_faithfulness_hypothesis, validate_system, BranchingSystem,
};
use lpa_core::equivrep::{
    build_b2b_basis, extract_subspaces, induced_system_and_intertwiner, parse_matrix_rep, validate_matrix_rep,
    MatrixRep,
};
use lpa_core::gen::{self, Sinks};
use lpa_core::graph::{fixtures, Graph};
use lpa_core::par::Exec;
use lpa_core::qfield::QNum;
use lpa_core::rep::{apply_element, apply_generator, relation_suite, zero_test_semantic, FinSupp, ZeroVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

fn gen_apply(sys: &BranchingSystem, g: Generator, phi: &FinSupp) -> FinSupp {
    apply_generator(sys, g, phi).expect("generator of the system's graph")
}

/// The defining relations checked straight from the operator definitions on
/// `δ_z`, independent of the library's relation list.
fn relations_hold_at(sys: &BranchingSystem, z: &QNum) -> Result<(), String> {
    let g = sys.graph();
    let d = FinSupp::delta(z.clone());
    let p = |v| gen_apply(sys, Generator::Vertex(v), &d);
    let fail = |what: String| Err(format!("{what} fails at z = {z}"));
    for v in g.vertices() {
        for w in g.vertices() {
            let lhs = gen_apply(sys, Generator::Vertex(v), &p(w));
            let rhs = if v == w { p(v) } else { FinSupp::zero() };
            if lhs != rhs {
                return fail(format!("P_{} P_{}", g.vertex_name(v), g.vertex_name(w)));
            }
        }
    }
    for e in g.edges() {
        let (s, r) = (Generator::Vertex(g.src(e)), Generator::Vertex(g.rng(e)));
        let se = gen_apply(sys, Generator::Edge(e), &d);
        if gen_apply(sys, s, &se) != se || gen_apply(sys, Generator::Edge(e), &gen_apply(sys, r, &d)) != se {
            return fail(format!("S_{} vs its projections", g.edge_name(e)));
        }
        let ge = gen_apply(sys, Generator::Ghost(e), &d);
        if gen_apply(sys, r, &ge) != ge || gen_apply(sys, Generator::Ghost(e), &gen_apply(sys, s, &d)) != ge {
            return fail(format!("S_{}* vs its projections", g.edge_name(e)));
        }
        for f in g.edges() {
            let lhs = gen_apply(sys, Generator::Ghost(e), &gen_apply(sys, Generator::Edge(f), &d));
            let rhs = if e == f { p(g.rng(e)) } else { FinSupp::zero() };
            if lhs != rhs {
                return fail(format!("S_{}* S_{}", g.edge_name(e), g.edge_name(f)));
            }
        }
    }
    for v in g.vertices().filter(|&v| !g.is_sink(v)) {
        let sum = g.out_edges(v).iter().fold(FinSupp::zero(), |acc, &e| {
            acc.plus(&gen_apply(sys, Generator::Edge(e), &gen_apply(sys, Generator::Ghost(e), &d)))
        });
        if sum != p(v) {
            return fail(format!("Σ S_e S_e* at {}", g.vertex_name(v)));
        }
    }
    Ok(())
}

fn system_passes(sys: &BranchingSystem) -> Result<usize, String> {
    validate_system(sys).map_err(|v| format!("{} system invalid: {}", sys.kind(), v[0]))?;
    let checked = relation_suite(sys, Exec::default())
        .map_err(|f| format!("{} relation {} fails at z = {}", sys.kind(), f[0].relation, f[0].z))?;
    for z in sys.cell_points() {
        relations_hold_at(sys, &z)?;
    }
    Ok(checked)
}

fn criterion_1() -> Outcome {
    let mut rng = rng(1);
    let mut checks = 0;
    for _ in 0..100 {
        let g = gen::random_graph(&mut rng, 8, 12, Sinks::Forbidden);
        let rot = build_rotation_system(&g).map_err(|e| e.to_string())?;
        checks += system_passes(&rot)?;
        checks += system_passes(&build_interval_system(&g))?;
        let h = gen::random_graph(&mut rng, 8, 12, Sinks::Allowed);
        checks += system_passes(&build_interval_system(&h))?;
    }
    Ok(format!("300 systems, {checks} relation instances"))
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    let (mut zeros, mut nonzeros) = (0, 0);
    for _ in 0..20 {
        let g = gen::random_graph(&mut rng, 6, 9, Sinks::Forbidden);
        let sys = build_rotation_system(&g).map_err(|e| e.to_string())?;
        for k in 0..25 {
            let x = match k % 3 {
                0 => gen::random_element(&mut rng, &g, 6, 4),
                1 => gen::random_zero_element(&mut rng, &g, 2),
                _ => gen::random_zero_element(&mut rng, &g, 2) + gen::random_element(&mut rng, &g, 1, 4),
            };
            let syntactic = is_zero_syntactic(&g, &x);
            let semantic = zero_test_semantic(&sys, &x).map_err(|e| e.to_string())?;
            if syntactic != semantic.is_zero() {
                return Err(format!("disagreement on {}: syntactic {syntactic}, semantic {semantic}", x.display(&g)));
            }
            if let ZeroVerdict::Nonzero { z, w, coeff } = &semantic {
                if &apply_element(&sys, &x, &FinSupp::delta(z.clone())).get(w) != coeff {
                    return Err(format!("witness z = {z} does not realize {semantic}"));
                }
            }
            if syntactic {
                zeros += 1;
            } else {
                nonzeros += 1;
            }
        }
    }
    Ok(format!("500 elements agree ({zeros} zero, {nonzeros} nonzero)"))
}

/// `mod1(n·θ) = n√2 − ⌊n√2⌋`, with `⌊n√2⌋ = isqrt(2n²)`.
fn expected_orbit_point(n: i64) -> QNum {
    let floor = (BigInt::from(2) * BigInt::from(n) * BigInt::from(n)).sqrt();
    QNum::new(BigRational::from_integer(-floor), BigRational::from_integer(n.into()))
}

fn criterion_3() -> Outcome {
    let g = fixtures::loop_graph();
    let sys = build_rotation_system(&g).map_err(|e| e.to_string())?;
    let x = Generator::Edge(g.edge("x").unwrap());
    let mut phi = FinSupp::delta(QNum::zero());
    let mut seen = BTreeSet::new();
    for n in 0..=50 {
        let want = FinSupp::delta(expected_orbit_point(n));
        if phi != want {
            return Err(format!("x^{n} δ_0 = {phi}, expected {want}"));
        }
        seen.insert(phi.iter().next().unwrap().0.clone());
        phi = gen_apply(&sys, x, &phi);
    }
    if seen.len() != 51 {
        return Err(format!("only {} distinct orbit points", seen.len()));
    }
    let mut rng = rng(3);
    let mut zero_polys = 0;
    for _ in 0..100 {
        let coeffs = gen::random_laurent(&mut rng, 10);
        let all_zero = coeffs.values().all(Zero::is_zero);
        let p = gen::laurent_element(&mut rng, &g, &coeffs);
        let v = zero_test_semantic(&sys, &p).map_err(|e| e.to_string())?;
        if v.is_zero() != all_zero {
            return Err(format!("{} judged {v}", p.display(&g)));
        }
        zero_polys += all_zero as usize;
    }
    Ok(format!("51 distinct orbit points, 100 Laurent polynomials ({zero_polys} zero)"))
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let mut vertices = 0;
    let mut images = 0;
    for _ in 0..50 {
        let g = gen::random_graph(&mut rng, 8, 12, Sinks::Forbidden);
        let sys = build_rotation_system(&g).map_err(|e| e.to_string())?;
        for v in g.vertices() {
            let closed = g.closed_paths_from(v, 5);
            if closed.is_empty() {
                continue;
            }
            vertices += 1;
            let rep = check_faithfulness_hypothesis(&sys, v, 5);
            let z = rep.witness().ok_or_else(|| format!("no witness at {} in\n{g}", g.vertex_name(v)))?;
            if !z.is_rational() {
                return Err(format!("witness {z} at {} is not rational", g.vertex_name(v)));
            }
            for path in &closed {
                let mut w = z.clone();
                for &e in path.edges().iter().rev() {
                    w = sys.map(e).apply(&w).ok_or_else(|| format!("{} leaves the domain", path.display(&g)))?;
                }
                if w.sqrt2_coeff().is_zero() || &w == z {
                    return Err(format!("f_{}({z}) = {w}", path.display(&g)));
                }
                images += 1;
            }
        }
    }
    Ok(format!("{vertices} vertices certified, {images} closed-path images irrational"))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut checks = 0;
    for _ in 0..50 {
        let g = gen::random_graph(&mut rng, 8, 12, Sinks::AtLeastOne);
        checks += system_passes(&build_interval_system(&g))?;
    }
    Ok(format!("50 systems, {checks} relation instances"))
}

const E12: &str = "dim 2\nmap v1 1 0 0 0\nmap v2 0 0 0 1\nmap e 0 1 0 0\nmap e* 0 0 1 0\n";

/// `Φ(a)·B = B·[π(a)]` column by column, `[π(a)]` read off the induced system.
fn pipeline(g: &Graph, phi: &MatrixRep) -> Result<usize, String> {
    validate_matrix_rep(g, phi).map_err(|v| format!("invalid representation: {}", v[0].relation))?;
    let table = extract_subspaces(g, phi).map_err(|e| e.to_string())?;
    if let Some(p) = table.properties.iter().find(|p| !p.holds) {
        return Err(format!("property {} fails: {}", p.property, p.detail));
    }
    if table.properties.len() != 7 {
        return Err(format!("{} properties reported", table.properties.len()));
    }
    let b = build_b2b_basis(g, phi).map_err(|e| e.to_string())?;
    let ind = induced_system_and_intertwiner(g, phi, &b).map_err(|e| e.to_string())?;
    let n = phi.dim();
    let basis = b.matrix(n);
    let mut squares = 0;
    for a in Generator::all(g) {
        let left = phi.phi(a) * &basis;
        for x in 0..n {
            let image = gen_apply(&ind.system, a, &FinSupp::delta(QNum::from_int(x as i64)));
            let mut col = vec![BigRational::zero(); n];
            for (y, c) in image.iter() {
                let y: usize = y.as_rational().unwrap().to_integer().try_into().unwrap();
                for (i, entry) in basis.column(y).iter().enumerate() {
                    col[i] += entry * c;
                }
            }
            if left.column(x) != col {
                return Err(format!("square for {} fails at index {x}", a.name(g)));
            }
            squares += 1;
        }
    }
    Ok(squares)
}

fn criterion_6() -> Outcome {
    let e = fixtures::edge();
    let mut squares = pipeline(&e, &parse_matrix_rep(&e, E12).map_err(|e| e.to_string())?)?;
    let mut rng = rng(6);
    let mut dims = Vec::new();
    for _ in 0..20 {
        let g = gen::random_p_simple_tree(&mut rng, 6);
        let phi = gen::random_acyclic_rep(&mut rng, &g, 8);
        dims.push(phi.dim());
        squares += pipeline(&g, &phi).map_err(|m| format!("{m}\n{g}\n{}", phi.to_text(&g)))?;
    }
    Ok(format!("21 representations (dims {dims:?} plus E12), {squares} squares commute"))
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let mut worst = 0;
    for _ in 0..100 {
        let g = gen::random_p_simple_tree(&mut rng, 8);
        if !g.is_p_simple().holds {
            return Err(format!("generator produced a graph that is not P-simple:\n{g}"));
        }
        let left = g.level_decomposition().leftover.len();
        if left > 1 {
            return Err(format!("leftover of size {left} in\n{g}"));
        }
        worst = worst.max(left);
    }
    Ok(format!("100 graphs, largest leftover {worst}"))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let mut nontrivial = 0;
    for k in 0..200 {
        let (g, sys) = if k % 2 == 0 {
            let g = gen::random_graph(&mut rng, 5, 8, Sinks::Forbidden);
            let s = build_rotation_system(&g).map_err(|e| e.to_string())?;
            (g, s)
        } else {
            let g = gen::random_graph(&mut rng, 5, 8, Sinks::Allowed);
            let s = build_interval_system(&g);
            (g, s)
        };
        let x = gen::random_element(&mut rng, &g, 3, 3);
        let y = gen::random_element(&mut rng, &g, 3, 3);
        let d = FinSupp::delta(gen::random_point(&mut rng, &sys));
        let lhs = apply_element(&sys, &multiply(&x, &y), &d);
        let rhs = apply_element(&sys, &x, &apply_element(&sys, &y, &d));
        if lhs != rhs {
            return Err(format!("x = {}, y = {}, δ = {d}: {lhs} vs {rhs}", x.display(&g), y.display(&g)));
        }
        let nf = apply_element(&sys, &normal_form(&g, &multiply(&x, &y)), &d);
        if nf != lhs {
            return Err(format!("normal form changes the action of {}", multiply(&x, &y).display(&g)));
        }
        nontrivial += !lhs.is_zero() as usize;
    }
    Ok(format!("200 triples ({nontrivial} with nonzero result)"))
}

type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "relation suite", criterion_1, Some(Duration::from_secs(30))),
        (2, "oracle agreement", criterion_2, Some(Duration::from_secs(60))),
        (3, "Laurent fixture", criterion_3, None),
        (4, "faithfulness hypothesis", criterion_4, None),
        (5, "interval systems with sinks", criterion_5, None),
        (6, "equivalence pipeline", criterion_6, Some(Duration::from_secs(30))),
        (7, "level decomposition", criterion_7, None),
        (8, "homomorphism", criterion_8, None),
    ];
    let only: Vec<u32> = std::env::args().filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, run, budget) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let mut outcome = run();
        let dt = t.elapsed();
        if let (Ok(msg), Some(b)) = (&outcome, budget) {
            if dt > b {
                outcome = Err(format!("{msg}, but took longer than {}s", b.as_secs()));
            }
        }
        match outcome {
            Ok(msg) => println!("criterion {n} ({name}): pass [{:.2}s] {msg}", dt.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{:.2}s] {msg}", dt.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
