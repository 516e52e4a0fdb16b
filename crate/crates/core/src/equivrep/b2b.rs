use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;

use super::{extract_subspaces, fmt_vector, is_zero_vector, EquivError, Matrix, MatrixRep, SubspaceTable};
use crate::algebra::Generator;
use crate::branching::{validate_system, AffineBranch, BranchingSystem, Interval, PiecewiseMap, Region, SystemKind};
use crate::graph::{Graph, VertexId};
use crate::qfield::{int, QNum};
use crate::rep::{apply_generator, FinSupp};

type Vector = Vec<BigRational>;

/// Basis vectors `m_x` of `V`, with index sets `D_u`, `R_e ⊆ D_{s(e)}` and
/// `Ī` (the basis of `V̄`), and the induced bijections `f_e : D_{r(e)} → R_e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct B2BBasis {
    pub vectors: Vec<Vector>,
    pub domains: Vec<Vec<usize>>,
    pub ranges: Vec<Vec<usize>>,
    pub vbar: Vec<usize>,
    /// `f_e` as pairs `(x, y)` with `Φ(e)m_x = m_y`, sorted by `x`.
    pub maps: Vec<Vec<(usize, usize)>>,
}

impl B2BBasis {
    pub fn display<'a>(&'a self, g: &'a Graph) -> B2BDisplay<'a> {
        B2BDisplay { b: self, g }
    }

    /// The matrix with columns `m_0, m_1, …`.
    pub fn matrix(&self, dim: usize) -> Matrix {
        Matrix::from_columns(dim, &self.vectors)
    }
}

pub struct B2BDisplay<'a> {
    b: &'a B2BBasis,
    g: &'a Graph,
}

impl fmt::Display for B2BDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b, g) = (self.b, self.g);
        let set = |xs: &[usize]| xs.iter().map(|x| format!("x{x}")).collect::<Vec<_>>().join(", ");
        for (x, v) in b.vectors.iter().enumerate() {
            writeln!(f, "m_x{x} = {}", fmt_vector(v))?;
        }
        for v in g.vertices() {
            writeln!(f, "D_{} = {{{}}}", g.vertex_name(v), set(&b.domains[v.0]))?;
        }
        for e in g.edges() {
            writeln!(f, "R_{} = {{{}}}", g.edge_name(e), set(&b.ranges[e.0]))?;
            let pairs: Vec<String> = b.maps[e.0].iter().map(|(x, y)| format!("x{x} ↦ x{y}")).collect();
            writeln!(f, "f_{}: {}", g.edge_name(e), pairs.join(", "))?;
        }
        writeln!(f, "Ibar = {{{}}}", set(&b.vbar))
    }
}

fn image(m: &Matrix, vs: &[Vector]) -> Vec<Vector> {
    vs.iter().map(|v| m.apply(v)).collect()
}

fn as_set(vs: &[Vector]) -> BTreeSet<Vector> {
    vs.iter().cloned().collect()
}

/// Strongly connected components, each listed in declaration order, in an
/// order where every component comes after all components it reaches.
fn components_sinks_first(g: &Graph) -> Vec<Vec<VertexId>> {
    let n = g.num_vertices();
    let mut reach = vec![vec![false; n]; n];
    for (u, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![VertexId(u)];
        while let Some(w) = stack.pop() {
            for &e in g.out_edges(w) {
                let t = g.rng(e);
                if !row[t.0] {
                    row[t.0] = true;
                    stack.push(t);
                }
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for u in 0..n {
        if comp[u] != usize::MAX {
            continue;
        }
        let members: Vec<VertexId> =
            (0..n).filter(|&w| w == u || (reach[u][w] && reach[w][u])).map(VertexId).collect();
        for m in &members {
            comp[m.0] = comps.len();
        }
        comps.push(members);
    }
    let mut done = vec![false; comps.len()];
    let mut order = Vec::new();
    while order.len() < comps.len() {
        for c in 0..comps.len() {
            if done[c] {
                continue;
            }
            let ready = comps[c].iter().all(|&u| {
                g.out_edges(u).iter().all(|&e| {
                    let t = comp[g.rng(e).0];
                    t == c || done[t]
                })
            });
            if ready {
                done[c] = true;
                order.push(c);
            }
        }
    }
    order.into_iter().map(|c| comps[c].clone()).collect()
}

fn is_cyclic(g: &Graph, comp: &[VertexId]) -> bool {
    comp.len() > 1 || g.out_edges(comp[0]).iter().any(|&e| g.rng(e) == comp[0])
}

/// Sweep order inside a cyclic component: the leftover vertex of the level
/// decomposition first, then deeper levels, then declaration order.
fn sweep_order(g: &Graph, comp: &[VertexId]) -> Vec<VertexId> {
    let levels = g.level_decomposition();
    let mut order = comp.to_vec();
    order.sort_by_key(|&v| (!levels.leftover.contains(&v), std::cmp::Reverse(levels.level_of(v)), v));
    order
}

fn union_of_images(g: &Graph, phi: &MatrixRep, bases: &[Option<Vec<Vector>>], u: VertexId) -> Vec<Vector> {
    let mut out = Vec::new();
    for &e in g.out_edges(u) {
        let b = bases[g.rng(e).0].as_ref().expect("range processed first");
        out.extend(image(phi.phi(Generator::Edge(e)), b));
    }
    out
}

/// Chooses bases `B_u` with `B_u = ⋃_{s(e)=u} Φ(e)B_{r(e)}` at every emitter,
/// so that each `Φ(e)` carries `B_{r(e)}` onto `B_e ⊆ B_{s(e)}`.
///
/// Components are handled sinks first. Sinks get the canonical basis of
/// `V_u`; acyclic emitters take the union of images. Cyclic components are
/// seeded with canonical bases of the `V_e` and swept until the union rule is
/// a fixpoint; if none is reached the component is reported.
pub fn build_b2b_basis(g: &Graph, phi: &MatrixRep) -> Result<B2BBasis, EquivError> {
    let table = extract_subspaces(g, phi)?;
    let mut bases: Vec<Option<Vec<Vector>>> = vec![None; g.num_vertices()];
    for comp in components_sinks_first(g) {
        if !is_cyclic(g, &comp) {
            let u = comp[0];
            bases[u.0] = Some(if g.is_sink(u) {
                table.vertex[u.0].columns()
            } else {
                union_of_images(g, phi, &bases, u)
            });
            continue;
        }
        for &u in &comp {
            bases[u.0] = Some(g.out_edges(u).iter().flat_map(|e| table.edge[e.0].columns()).collect());
        }
        let order = sweep_order(g, &comp);
        let mut stable = false;
        for _ in 0..comp.len() + 8 {
            stable = true;
            for &u in &order {
                let next = union_of_images(g, phi, &bases, u);
                if as_set(&next) != as_set(bases[u.0].as_ref().unwrap()) {
                    bases[u.0] = Some(next);
                    stable = false;
                }
            }
            if stable {
                break;
            }
        }
        if !stable {
            let names: Vec<&str> = comp.iter().map(|&v| g.vertex_name(v)).collect();
            return Err(EquivError::NoBasis(format!(
                "no basis of the cycle through {{{}}} is carried onto itself",
                names.join(", ")
            )));
        }
    }
    let basis = label(g, phi, &table, bases.into_iter().map(Option::unwrap).collect());
    verify_b2b(g, phi, &table, &basis).map_err(EquivError::NoBasis)?;
    Ok(basis)
}

fn sorted(mut vs: Vec<Vector>) -> Vec<Vector> {
    vs.sort();
    vs.dedup();
    vs
}

/// Assigns indices vertex by vertex: an emitter's `D_u` is its `R_e` blocks
/// in edge order, a sink's `D_u` its own basis; `Ī` comes last.
fn label(g: &Graph, phi: &MatrixRep, table: &SubspaceTable, bases: Vec<Vec<Vector>>) -> B2BBasis {
    let mut vectors = Vec::new();
    let mut domains = vec![Vec::new(); g.num_vertices()];
    let mut ranges = vec![Vec::new(); g.num_edges()];
    for u in g.vertices() {
        if g.is_sink(u) {
            for v in sorted(bases[u.0].clone()) {
                domains[u.0].push(vectors.len());
                vectors.push(v);
            }
            continue;
        }
        for &e in g.out_edges(u) {
            for v in sorted(image(phi.phi(Generator::Edge(e)), &bases[g.rng(e).0])) {
                ranges[e.0].push(vectors.len());
                domains[u.0].push(vectors.len());
                vectors.push(v);
            }
        }
    }
    let mut vbar = Vec::new();
    for v in table.vbar.columns() {
        vbar.push(vectors.len());
        vectors.push(v);
    }
    let index: HashMap<&Vector, usize> = vectors.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let maps = g
        .edges()
        .map(|e| {
            let m = phi.phi(Generator::Edge(e));
            domains[g.rng(e).0]
                .iter()
                .filter_map(|&x| index.get(&m.apply(&vectors[x])).map(|&y| (x, y)))
                .collect()
        })
        .collect();
    B2BBasis { vectors, domains, ranges, vbar, maps }
}

/// Checks that the labeled vectors form a basis of `V` adapted to the
/// subspaces and that condition (B2B) holds for every edge.
pub fn verify_b2b(g: &Graph, phi: &MatrixRep, table: &SubspaceTable, b: &B2BBasis) -> Result<(), String> {
    let n = phi.dim();
    let m = b.matrix(n);
    if b.vectors.len() != n || m.rank() != n {
        return Err("labeled vectors do not form a basis of V".into());
    }
    let span = |xs: &[usize]| Matrix::from_columns(n, &xs.iter().map(|&x| b.vectors[x].clone()).collect::<Vec<_>>());
    for u in g.vertices() {
        let d = span(&b.domains[u.0]);
        let v = &table.vertex[u.0];
        if d.cols() != v.cols() || v.hstack(&d).rank() != v.cols() {
            return Err(format!("D_{} does not index a basis of V_{}", g.vertex_name(u), g.vertex_name(u)));
        }
        let outs = g.out_edges(u);
        if !outs.is_empty() {
            let mut from_edges: Vec<usize> = outs.iter().flat_map(|e| b.ranges[e.0].iter().copied()).collect();
            from_edges.sort();
            let mut dom = b.domains[u.0].clone();
            dom.sort();
            if from_edges != dom {
                return Err(format!("D_{} is not the union of its R_e", g.vertex_name(u)));
            }
        }
    }
    for e in g.edges() {
        let name = g.edge_name(e);
        let r = span(&b.ranges[e.0]);
        let ve = &table.edge[e.0];
        if r.cols() != ve.cols() || ve.hstack(&r).rank() != ve.cols() {
            return Err(format!("R_{name} does not index a basis of V_{name}"));
        }
        let pushed: Vec<Vector> = b.domains[g.rng(e).0]
            .iter()
            .map(|&x| phi.phi(Generator::Edge(e)).apply(&b.vectors[x]))
            .collect();
        let target: Vec<Vector> = b.ranges[e.0].iter().map(|&y| b.vectors[y].clone()).collect();
        if as_set(&pushed) != as_set(&target) || pushed.len() != target.len() {
            return Err(format!("Φ({name}) does not carry the D_{} vectors onto the R_{name} vectors", g.vertex_name(g.rng(e))));
        }
    }
    for &x in &b.vbar {
        if g.vertices().any(|u| !is_zero_vector(&phi.phi(Generator::Vertex(u)).apply(&b.vectors[x]))) {
            return Err("a V̄ vector is not killed by every Φ(u)".into());
        }
    }
    Ok(())
}

/// The branching system on the index set (index `x` realized as the atom
/// `[x, x+1)`), the extra points `Ī`, the intertwiner `U = B⁻¹` sending
/// `m_x ↦ δ_x`, and which commuting squares were verified.
#[derive(Debug, Clone)]
pub struct Induced {
    pub system: BranchingSystem,
    pub vbar_points: Vec<QNum>,
    pub u: Matrix,
    /// `U∘Φ(a) = π(a)∘U` on `W = ⊕V_u`, for every generator `a`.
    pub restricted: bool,
    /// The same on all of `V` over `Y = X ∪ Ī`.
    pub full: bool,
    pub squares_checked: usize,
}

fn atom(x: usize) -> Interval {
    Interval::ints(x as i64, x as i64 + 1)
}

fn atoms(xs: &[usize]) -> Region {
    Region::from_intervals(xs.iter().map(|&x| atom(x)))
}

pub fn induced_system_and_intertwiner(g: &Graph, phi: &MatrixRep, b: &B2BBasis) -> Result<Induced, EquivError> {
    let n = phi.dim();
    let ranges: Vec<Region> = g.edges().map(|e| atoms(&b.ranges[e.0])).collect();
    let domains: Vec<Region> = g.vertices().map(|v| atoms(&b.domains[v.0])).collect();
    let maps: Vec<PiecewiseMap> = g
        .edges()
        .map(|e| {
            PiecewiseMap::new(
                b.maps[e.0]
                    .iter()
                    .map(|&(x, y)| AffineBranch::new(atom(x), int(1), QNum::from_int(y as i64 - x as i64)))
                    .collect(),
            )
        })
        .collect();
    let system = BranchingSystem::new(g.clone(), SystemKind::Discrete, ranges, domains, maps);
    if let Err(v) = validate_system(&system) {
        return Err(EquivError::InvalidSystem(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")));
    }
    let u = b.matrix(n).inverse().ok_or_else(|| EquivError::NoBasis("basis matrix is singular".into()))?;
    let mut squares = 0;
    for gen in Generator::all(g) {
        let lhs = &(&u * phi.phi(gen)) * &b.matrix(n);
        for x in 0..n {
            let col = apply_generator(&system, gen, &FinSupp::delta(QNum::from_int(x as i64))).expect("generator of g");
            let mut rhs = vec![int(0); n];
            for (z, c) in col.iter() {
                let y = z.as_rational().expect("integer atom").to_integer();
                let y: usize = y.try_into().expect("index in range");
                rhs[y] = c.clone();
            }
            squares += 1;
            if lhs.column(x) != rhs {
                let part = if b.vbar.contains(&x) { "V̄" } else { "W" };
                return Err(EquivError::Intertwiner { generator: gen.name(g), part: part.into() });
            }
        }
    }
    Ok(Induced {
        system,
        vbar_points: b.vbar.iter().map(|&x| QNum::from_int(x as i64)).collect(),
        u,
        restricted: true,
        full: true,
        squares_checked: squares,
    })
}
