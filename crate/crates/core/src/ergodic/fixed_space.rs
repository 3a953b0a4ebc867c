//! Symbolic solution of `T*y = y`, i.e. `y_u = Σ_v w(u, v) y_v` for all `u`.
//!
//! The equations are solved on a finite window of vertices. Successors
//! outside the window stay unknown. Four rules are applied until nothing
//! changes:
//!
//! * a vertex whose successors are all known to vanish vanishes;
//! * a vertex with a single unknown successor, reached with weight `1`,
//!   equals it;
//! * a class of equal values that contains every window member of an
//!   infinite chain together with the chain's next member outside the
//!   window vanishes, since a summable sequence has no nonzero constant
//!   infinite subsequence;
//! * everything equal to a vanishing vertex vanishes.
//!
//! The chain rule rests on structural knowledge that the same relation
//! continues along the chain past the window. That knowledge is supplied
//! as [`InfiniteChain`] metadata and is never inferred from the window.

use std::fmt;
use std::hash::Hash;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::graphop::C0Graph;
use crate::ladder::{rung_position, LadderFamilyGraph, LadderKind, LadderVertex};
use crate::rational::Rational;

use num_traits::ToPrimitive;

/// An infinite path `members[0] → members[1] → … → tail → …` along which
/// the graph repeats the same local structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteChain<V> {
    pub name: String,
    pub members: Vec<V>,
    /// The first member past the window.
    pub tail: V,
}

/// The fixed-point equations on a window, plus chain metadata.
#[derive(Clone, Debug)]
pub struct FixedSpaceProblem<V: Hash + Eq> {
    pub description: String,
    pub window: Vec<V>,
    equations: FxHashMap<V, Vec<(V, Rational)>>,
    pub chains: Vec<InfiniteChain<V>>,
}

impl<V: Clone + Hash + Eq + Ord> FixedSpaceProblem<V> {
    pub fn from_graph<G: C0Graph<Vertex = V>>(g: &G, window: Vec<V>, chains: Vec<InfiniteChain<V>>) -> Self {
        let equations = window.iter().map(|u| (u.clone(), g.successors(u).to_vec())).collect();
        Self {
            description: g.description().to_string(),
            window,
            equations,
            chains,
        }
    }

    /// Right-hand side of `y_u = Σ_v w(u, v) y_v`.
    pub fn equation(&self, u: &V) -> Option<&[(V, Rational)]> {
        self.equations.get(u).map(Vec::as_slice)
    }
}

/// One derivation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<V> {
    /// `y_u = Σ w(u, v) y_v` with every `y_v` already zero (or no terms).
    Zero { vertex: V, terms: Vec<V> },
    /// `y_u = y_v` once the other terms, all zero, are dropped.
    Merge { vertex: V, with: V, dropped: Vec<V> },
    /// The class of a whole infinite chain is constant, hence zero.
    NullClass { chain: String, members: Vec<V> },
    /// `y_u = y_via` and `y_via = 0`.
    EqualToZero { vertex: V, via: V },
}

impl<V: fmt::Display> fmt::Display for Step<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[V]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Step::Zero { vertex, terms } if terms.is_empty() => write!(f, "y[{vertex}] = 0 (no successors)"),
            Step::Zero { vertex, terms } => write!(f, "y[{vertex}] = 0 (successors {} vanish)", list(terms)),
            Step::Merge { vertex, with, dropped } if dropped.is_empty() => write!(f, "y[{vertex}] = y[{with}]"),
            Step::Merge { vertex, with, dropped } => {
                write!(f, "y[{vertex}] = y[{with}] (dropping zero terms {})", list(dropped))
            }
            Step::NullClass { chain, members } => {
                write!(f, "chain {chain}: constant on {} vertices, hence 0", members.len())
            }
            Step::EqualToZero { vertex, via } => write!(f, "y[{vertex}] = y[{via}] = 0"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    OnlyZero,
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::OnlyZero => write!(f, "only_zero"),
            Conclusion::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSpaceCertificate<V> {
    /// Window vertices shown to vanish, in derivation order.
    pub forced_zero: Vec<V>,
    /// Classes of equal values among the remaining window vertices.
    pub equality_classes: Vec<Vec<V>>,
    pub relations: Vec<Step<V>>,
    pub conclusion: Conclusion,
}

struct UnionFind<V> {
    parent: FxHashMap<V, V>,
}

impl<V: Clone + Hash + Eq> UnionFind<V> {
    fn new() -> Self {
        Self {
            parent: FxHashMap::default(),
        }
    }

    fn find(&mut self, v: &V) -> V {
        let mut root = v.clone();
        while let Some(p) = self.parent.get(&root) {
            if *p == root {
                break;
            }
            root = p.clone();
        }
        let mut cur = v.clone();
        while cur != root {
            let next = self.parent.insert(cur, root.clone()).unwrap_or_else(|| root.clone());
            cur = next;
        }
        root
    }

    /// Returns `false` if already joined.
    fn union(&mut self, a: &V, b: &V) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent.insert(ra, rb);
        true
    }
}

struct State<V> {
    zero: FxHashSet<V>,
    classes: UnionFind<V>,
    /// Every vertex ever named, so classes can be listed.
    known: Vec<V>,
    seen: FxHashSet<V>,
}

impl<V: Clone + Hash + Eq + Ord> State<V> {
    fn new() -> Self {
        Self {
            zero: FxHashSet::default(),
            classes: UnionFind::new(),
            known: Vec::new(),
            seen: FxHashSet::default(),
        }
    }

    fn note(&mut self, v: &V) {
        if self.seen.insert(v.clone()) {
            self.known.push(v.clone());
        }
    }

    fn class_of(&mut self, v: &V) -> Vec<V> {
        let root = self.classes.find(v);
        let known = self.known.clone();
        let mut out: Vec<V> = known.into_iter().filter(|x| self.classes.find(x) == root).collect();
        out.sort();
        out
    }
}

/// Applies the rules to a fixpoint and records every step.
pub fn certify_fixed_space<V>(problem: &FixedSpaceProblem<V>) -> FixedSpaceCertificate<V>
where
    V: Clone + Hash + Eq + Ord + fmt::Debug,
{
    let mut st = State::new();
    for u in &problem.window {
        st.note(u);
    }
    for c in &problem.chains {
        c.members.iter().for_each(|m| st.note(m));
        st.note(&c.tail);
    }
    let mut steps = Vec::new();
    let mut forced_zero = Vec::new();
    let mut progress = true;
    while progress {
        progress = false;
        for u in &problem.window {
            if st.zero.contains(u) {
                continue;
            }
            let eq = problem.equation(u).expect("window vertex");
            let unknown: Vec<&(V, Rational)> = eq.iter().filter(|(v, _)| !st.zero.contains(v)).collect();
            if unknown.is_empty() {
                steps.push(Step::Zero {
                    vertex: u.clone(),
                    terms: eq.iter().map(|(v, _)| v.clone()).collect(),
                });
                st.zero.insert(u.clone());
                forced_zero.push(u.clone());
                for mate in st.class_of(u) {
                    if st.zero.insert(mate.clone()) {
                        steps.push(Step::EqualToZero {
                            vertex: mate.clone(),
                            via: u.clone(),
                        });
                        forced_zero.push(mate);
                    }
                }
                progress = true;
            } else if let [(v, w)] = unknown.as_slice() {
                if w.is_one() {
                    st.note(v);
                    if st.classes.union(u, v) {
                        steps.push(Step::Merge {
                            vertex: u.clone(),
                            with: v.clone(),
                            dropped: eq.iter().filter(|(x, _)| x != v).map(|(x, _)| x.clone()).collect(),
                        });
                        progress = true;
                    }
                }
            }
        }
        for c in &problem.chains {
            if st.zero.contains(&c.tail) {
                continue;
            }
            let root = st.classes.find(&c.tail);
            if c.members.iter().all(|m| st.classes.find(m) == root) {
                let members = st.class_of(&c.tail);
                for m in &members {
                    if st.zero.insert(m.clone()) {
                        forced_zero.push(m.clone());
                    }
                }
                steps.push(Step::NullClass {
                    chain: c.name.clone(),
                    members,
                });
                progress = true;
            }
        }
    }
    let window: FxHashSet<&V> = problem.window.iter().collect();
    forced_zero.retain(|v| window.contains(v));
    let mut remaining: FxHashMap<V, Vec<V>> = FxHashMap::default();
    for u in &problem.window {
        if !st.zero.contains(u) {
            let root = st.classes.find(u);
            remaining.entry(root).or_default().push(u.clone());
        }
    }
    let mut equality_classes: Vec<Vec<V>> = remaining.into_values().collect();
    equality_classes.iter_mut().for_each(|c| c.sort());
    equality_classes.sort();
    FixedSpaceCertificate {
        conclusion: if equality_classes.is_empty() {
            Conclusion::OnlyZero
        } else {
            Conclusion::Inconclusive
        },
        forced_zero,
        equality_classes,
        relations: steps,
    }
}

impl<V> FixedSpaceCertificate<V>
where
    V: Clone + Hash + Eq + Ord + fmt::Debug + fmt::Display,
{
    /// Re-derives every step by substitution into the equations of
    /// `problem`, and checks that the claimed zero set is exactly what the
    /// steps establish.
    pub fn replay(&self, problem: &FixedSpaceProblem<V>) -> Result<(), String> {
        let mut zero: FxHashSet<V> = FxHashSet::default();
        let mut classes = UnionFind::new();
        let eq_of = |u: &V| problem.equation(u).ok_or_else(|| format!("{u} has no equation in the window"));
        for (i, step) in self.relations.iter().enumerate() {
            let fail = |why: &str| Err(format!("step {i} ({step}): {why}"));
            match step {
                Step::Zero { vertex, terms } => {
                    let eq = eq_of(vertex)?;
                    let mut rhs: Vec<&V> = eq.iter().map(|(v, _)| v).collect();
                    let mut listed: Vec<&V> = terms.iter().collect();
                    rhs.sort();
                    listed.sort();
                    if rhs != listed {
                        return fail("terms differ from the equation");
                    }
                    if !terms.iter().all(|t| zero.contains(t)) {
                        return fail("a term is not yet zero");
                    }
                    zero.insert(vertex.clone());
                }
                Step::Merge { vertex, with, dropped } => {
                    let eq = eq_of(vertex)?;
                    if !eq.iter().any(|(v, w)| v == with && w.is_one()) {
                        return fail("no weight-1 edge to the merged vertex");
                    }
                    if eq.len() != dropped.len() + 1 || !eq.iter().all(|(v, _)| v == with || dropped.contains(v)) {
                        return fail("dropped terms differ from the equation");
                    }
                    if !dropped.iter().all(|d| zero.contains(d)) {
                        return fail("a dropped term is not zero");
                    }
                    classes.union(vertex, with);
                }
                Step::NullClass { chain, members } => {
                    let Some(c) = problem.chains.iter().find(|c| &c.name == chain) else {
                        return fail("unknown chain");
                    };
                    let root = classes.find(&c.tail);
                    let in_class = |classes: &mut UnionFind<V>, v: &V| classes.find(v) == root;
                    if !c.members.iter().all(|m| in_class(&mut classes, m)) {
                        return fail("chain members are not all equal to the tail");
                    }
                    if !members.iter().all(|m| in_class(&mut classes, m)) {
                        return fail("a listed member is not in the chain's class");
                    }
                    zero.extend(members.iter().cloned());
                }
                Step::EqualToZero { vertex, via } => {
                    if classes.find(vertex) != classes.find(via) || !zero.contains(via) {
                        return fail("not equal to a zero vertex");
                    }
                    zero.insert(vertex.clone());
                }
            }
        }
        let claimed: FxHashSet<&V> = self.forced_zero.iter().collect();
        for v in &problem.window {
            if zero.contains(v) != claimed.contains(v) {
                return Err(format!("{v}: replayed and claimed zero sets differ"));
            }
        }
        let all_zero = problem.window.iter().all(|v| zero.contains(v));
        if all_zero != (self.conclusion == Conclusion::OnlyZero) {
            return Err("conclusion does not follow from the steps".into());
        }
        Ok(())
    }
}

/// Default window: copies `k ≤ 3`, four top vertices per copy.
pub const DEFAULT_COPIES: u32 = 3;
pub const DEFAULT_TOP_SPAN: u32 = 4;

/// The window of copies `k ≤ copies` (only the graph's own copy when
/// standalone), with tops `s_{k+1} … s_{k+span}`, every bottom vertex up to
/// the last of their landings, the sinks, the entries and the source; the
/// top chain of each copy and, in the combined graph, the entry chain are
/// infinite chains.
pub fn ladder_fixed_space_problem(g: &LadderFamilyGraph, copies: u32, span: u32) -> FixedSpaceProblem<LadderVertex> {
    assert!(span >= 1, "need at least one top vertex per copy");
    let ks: Vec<u32> = match g.kind().copy() {
        Some(k) => vec![k],
        None => (0..=copies).collect(),
    };
    let mut window = Vec::new();
    let mut chains = Vec::new();
    if g.kind() == LadderKind::Combined {
        window.push(LadderVertex::Source);
        chains.push(InfiniteChain {
            name: "entries".into(),
            members: ks.iter().map(|&k| LadderVertex::Entry(k)).collect(),
            tail: LadderVertex::Entry(copies + 1),
        });
    }
    for &k in &ks {
        let last = k + span;
        let deepest = rung_position(last).to_u64().expect("small window");
        window.push(LadderVertex::Entry(k));
        window.push(LadderVertex::Sink(k));
        let tops: Vec<LadderVertex> = (k + 1..=last).map(|n| LadderVertex::Top { k, n }).collect();
        window.extend(tops.iter().copied());
        for j in 1..=deepest {
            window.push(LadderVertex::bottom(k, j).expect("positive"));
        }
        chains.push(InfiniteChain {
            name: format!("top chain of copy {k}"),
            members: tops,
            tail: LadderVertex::Top { k, n: last + 1 },
        });
    }
    FixedSpaceProblem::from_graph(g, window, chains)
}

/// Certificate for the default window.
pub fn fixed_space_certificate(g: &LadderFamilyGraph) -> FixedSpaceCertificate<LadderVertex> {
    certify_fixed_space(&ladder_fixed_space_problem(g, DEFAULT_COPIES, DEFAULT_TOP_SPAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphop::ExplicitGraph;
    use crate::ladder::{make_counterexample, make_g0, make_gk};

    fn check(g: &LadderFamilyGraph) -> FixedSpaceCertificate<LadderVertex> {
        let problem = ladder_fixed_space_problem(g, DEFAULT_COPIES, DEFAULT_TOP_SPAN);
        let cert = certify_fixed_space(&problem);
        assert_eq!(cert.conclusion, Conclusion::OnlyZero, "{}", g.kind());
        cert.replay(&problem).unwrap();
        assert_eq!(cert.forced_zero.len(), problem.window.len());
        cert
    }

    #[test]
    fn g0_is_only_zero() {
        let cert = check(&make_g0());
        let pos = |v: &LadderVertex| cert.forced_zero.iter().position(|x| x == v).unwrap();
        // The sink and bottoms come first, the top chain by the chain rule.
        assert_eq!(cert.forced_zero[0], LadderVertex::Sink(0));
        assert!(pos(&LadderVertex::bottom(0, 26).unwrap()) < pos(&LadderVertex::Top { k: 0, n: 1 }));
        assert!(cert
            .relations
            .iter()
            .any(|s| matches!(s, Step::NullClass { chain, .. } if chain == "top chain of copy 0")));
    }

    #[test]
    fn copies_and_combined_are_only_zero() {
        for k in 1..=3 {
            check(&make_gk(k));
        }
        let cert = check(&make_counterexample());
        let entry_step = cert
            .relations
            .iter()
            .find_map(|s| match s {
                Step::Merge { vertex, with, dropped } if *vertex == LadderVertex::Entry(1) => {
                    Some((*with, dropped.clone()))
                }
                _ => None,
            })
            .unwrap();
        assert_eq!(entry_step, (LadderVertex::Entry(2), vec![LadderVertex::Top { k: 1, n: 2 }]));
        assert!(cert
            .relations
            .iter()
            .any(|s| matches!(s, Step::NullClass { chain, members } if chain == "entries" && members.contains(&LadderVertex::Source))));
    }

    #[test]
    fn self_loop_is_inconclusive() {
        let g = ExplicitGraph::from_edges("loop", 1, [(0, 0, Rational::ONE)]).unwrap();
        let problem = FixedSpaceProblem::from_graph(&g, vec![0], Vec::new());
        let cert = certify_fixed_space(&problem);
        assert_eq!(cert.conclusion, Conclusion::Inconclusive);
        assert_eq!(cert.equality_classes, vec![vec![0]]);
        cert.replay(&problem).unwrap();
    }

    #[test]
    fn missing_chain_metadata_is_inconclusive() {
        let g = make_g0();
        let mut problem = ladder_fixed_space_problem(&g, 0, 3);
        problem.chains.clear();
        let cert = certify_fixed_space(&problem);
        assert_eq!(cert.conclusion, Conclusion::Inconclusive);
        assert_eq!(cert.equality_classes.len(), 1);
        cert.replay(&problem).unwrap();
    }

    #[test]
    fn tampered_certificates_fail_replay() {
        let g = make_g0();
        let problem = ladder_fixed_space_problem(&g, 0, 2);
        let cert = certify_fixed_space(&problem);
        let mut bad = cert.clone();
        bad.relations.remove(0);
        assert!(bad.replay(&problem).is_err());
        let mut bad = cert.clone();
        bad.relations.retain(|s| !matches!(s, Step::NullClass { .. }));
        assert!(bad.replay(&problem).is_err());
        let mut bad = cert;
        bad.forced_zero.pop();
        assert!(bad.replay(&problem).is_err());
    }
}
