//! Leakage-controlled train/test partitions and negative sampling.
//!
//! A test pair falls in class C1, C2 or C3 when two, one or none of its
//! endpoints occur among the training proteins. No test pair ever repeats a
//! training pair.
//!
//! [`generate_split`] fills exact per-label quotas. A plain shuffle-and-fill
//! over pairs almost never leaves enough pairs with *no* training endpoint,
//! so generation first searches (seeded annealing) for a train/non-train
//! side for every protein, such that the pair counts inside, across and
//! outside the train side cover the quotas, then fills train from the
//! within-side pairs and classifies the rest. Correctness never depends on
//! the search: classes are always recomputed from the actual training nodes
//! and the result is checked with [`verify_split`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::sequences::{InteractionRecord, Label, ProteinId, UnorderedPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TestClass {
    C1,
    C2,
    C3,
}

impl TestClass {
    pub const ALL: [TestClass; 3] = [TestClass::C1, TestClass::C2, TestClass::C3];

    pub fn name(self) -> &'static str {
        match self {
            TestClass::C1 => "c1",
            TestClass::C2 => "c2",
            TestClass::C3 => "c3",
        }
    }
}

impl fmt::Display for TestClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestClass::C1 => "C1",
            TestClass::C2 => "C2",
            TestClass::C3 => "C3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Test(TestClass),
    /// The exact pair is already a training pair.
    Rejected,
}

/// Class of a candidate test pair given the training set.
pub fn classify_pair(
    pair: &UnorderedPair,
    train_nodes: &HashSet<ProteinId>,
    train_pairs: &HashSet<UnorderedPair>,
) -> Classification {
    if train_pairs.contains(pair) {
        return Classification::Rejected;
    }
    let shared = train_nodes.contains(pair.first()) as u8 + train_nodes.contains(pair.second()) as u8;
    Classification::Test(match shared {
        2 => TestClass::C1,
        1 => TestClass::C2,
        _ => TestClass::C3,
    })
}

#[derive(Debug, Error)]
pub enum SplitError {
    #[error("pair {a}-{b} occurs more than once in the input")]
    DuplicatePair { a: ProteinId, b: ProteinId },
    #[error("targets ask for {requested} pairs but only {available} are available")]
    TargetsExceedPairs { requested: usize, available: usize },
    #[error("split targets unreachable with this seed; achieved {achieved}")]
    Infeasible { achieved: SplitCounts },
    #[error("cannot sample {requested} negatives: at most {max} non-interacting pairs exist")]
    TooManyNegatives { requested: usize, max: usize },
}

/// Positive and negative pair counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    pub positives: usize,
    pub negatives: usize,
}

impl LabelCounts {
    pub fn new(positives: usize, negatives: usize) -> Self {
        LabelCounts { positives, negatives }
    }

    /// `count` pairs at a 1:1 ratio (`count` must be even).
    pub fn balanced(count: usize) -> Self {
        LabelCounts::new(count / 2, count - count / 2)
    }

    /// `count` pairs at `pos:neg`, rounding positives down.
    pub fn with_ratio(count: usize, pos: usize, neg: usize) -> Self {
        let p = count * pos / (pos + neg).max(1);
        LabelCounts::new(p, count - p)
    }

    pub fn total(&self) -> usize {
        self.positives + self.negatives
    }

    pub fn get(&self, label: Label) -> usize {
        if label.is_positive() {
            self.positives
        } else {
            self.negatives
        }
    }

    fn bump(&mut self, label: Label) {
        if label.is_positive() {
            self.positives += 1;
        } else {
            self.negatives += 1;
        }
    }

    pub fn of(records: &[InteractionRecord]) -> Self {
        let mut c = LabelCounts::default();
        for r in records {
            c.bump(r.label);
        }
        c
    }
}

impl fmt::Display for LabelCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+/{}-", self.positives, self.negatives)
    }
}

/// Counts per set; used both as generation targets and as achieved counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SplitCounts {
    pub train: LabelCounts,
    pub c1: LabelCounts,
    pub c2: LabelCounts,
    pub c3: LabelCounts,
}

pub type SplitTargets = SplitCounts;

impl SplitCounts {
    /// The competition shape: 4000 train, 2000 C1, 1500 C2, 1500 C3, all 1:1.
    pub fn competition() -> Self {
        SplitCounts {
            train: LabelCounts::balanced(4000),
            c1: LabelCounts::balanced(2000),
            c2: LabelCounts::balanced(1500),
            c3: LabelCounts::balanced(1500),
        }
    }

    pub fn class(&self, class: TestClass) -> LabelCounts {
        match class {
            TestClass::C1 => self.c1,
            TestClass::C2 => self.c2,
            TestClass::C3 => self.c3,
        }
    }

    fn class_mut(&mut self, class: TestClass) -> &mut LabelCounts {
        match class {
            TestClass::C1 => &mut self.c1,
            TestClass::C2 => &mut self.c2,
            TestClass::C3 => &mut self.c3,
        }
    }

    pub fn total(&self) -> usize {
        self.train.total() + self.c1.total() + self.c2.total() + self.c3.total()
    }
}

impl fmt::Display for SplitCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "train {} c1 {} c2 {} c3 {}",
            self.train, self.c1, self.c2, self.c3
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub train_pairs: Vec<InteractionRecord>,
    /// Endpoints of `train_pairs`, sorted.
    pub train_nodes: BTreeSet<ProteinId>,
    pub c1: Vec<InteractionRecord>,
    pub c2: Vec<InteractionRecord>,
    pub c3: Vec<InteractionRecord>,
    pub seed: u64,
}

impl SplitResult {
    /// Builds a split from given sets, deriving `train_nodes`.
    pub fn from_sets(
        train_pairs: Vec<InteractionRecord>,
        c1: Vec<InteractionRecord>,
        c2: Vec<InteractionRecord>,
        c3: Vec<InteractionRecord>,
        seed: u64,
    ) -> Self {
        let train_nodes = nodes_of(&train_pairs);
        SplitResult { train_pairs, train_nodes, c1, c2, c3, seed }
    }

    pub fn class(&self, class: TestClass) -> &[InteractionRecord] {
        match class {
            TestClass::C1 => &self.c1,
            TestClass::C2 => &self.c2,
            TestClass::C3 => &self.c3,
        }
    }

    pub fn counts(&self) -> SplitCounts {
        SplitCounts {
            train: LabelCounts::of(&self.train_pairs),
            c1: LabelCounts::of(&self.c1),
            c2: LabelCounts::of(&self.c2),
            c3: LabelCounts::of(&self.c3),
        }
    }
}

fn nodes_of(records: &[InteractionRecord]) -> BTreeSet<ProteinId> {
    records
        .iter()
        .flat_map(|r| [r.a.clone(), r.b.clone()])
        .collect()
}

// ---------------------------------------------------------------------------
// negative sampling

/// Samples `n` distinct non-self pairs over `nodes` that are not in `known`,
/// labeled non-interacting. Duplicate nodes are ignored (first occurrence
/// wins). The result depends only on the node order and the seed.
pub fn sample_negatives(
    nodes: &[ProteinId],
    known: &HashSet<UnorderedPair>,
    n: usize,
    seed: u64,
) -> Result<Vec<InteractionRecord>, SplitError> {
    let mut seen = HashSet::new();
    let nodes: Vec<&ProteinId> = nodes.iter().filter(|id| seen.insert(*id)).collect();
    let m = nodes.len();
    let all = m * m.saturating_sub(1) / 2;
    let known_inside = known
        .iter()
        .filter(|p| !p.is_self_pair() && seen.contains(p.first()) && seen.contains(p.second()))
        .count();
    let max = all - known_inside;
    if n > max {
        return Err(SplitError::TooManyNegatives { requested: n, max });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let make = |i: usize, j: usize| UnorderedPair::new(nodes[i].clone(), nodes[j].clone());
    let picked: Vec<UnorderedPair> = if n <= max / 2 {
        // sparse: rejection sampling, expected < 2 draws per pair
        let mut chosen = HashSet::with_capacity(n);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            if i == j {
                continue;
            }
            let p = make(i, j);
            if known.contains(&p) || chosen.contains(&p) {
                continue;
            }
            chosen.insert(p.clone());
            out.push(p);
        }
        out
    } else {
        // dense: enumerate candidates and take a seeded prefix of a shuffle
        let mut cands: Vec<UnorderedPair> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .map(|(i, j)| make(i, j))
            .filter(|p| !known.contains(p))
            .collect();
        let (head, _) = cands.partial_shuffle(&mut rng, n);
        head.to_vec()
    };
    Ok(picked
        .into_iter()
        .map(|p| InteractionRecord::new(p.first().clone(), p.second().clone(), Label::NonInteracting))
        .collect())
}

// ---------------------------------------------------------------------------
// generation

const TT: usize = 0;
const TU: usize = 1;
const UU: usize = 2;

fn lab(l: Label) -> usize {
    l.is_positive() as usize
}

/// Search state: which proteins sit on the train side, and how many pairs of
/// each label fall inside / across / outside it.
struct SideSearch<'a> {
    adj: &'a [Vec<(usize, usize)>],
    side: Vec<bool>,
    /// Number of incident pairs whose other endpoint is on the train side.
    t_deg: Vec<usize>,
    counts: [[usize; 2]; 3],
    need: [[usize; 2]; 3],
    /// Train-side proteins with no pair inside the train side.
    stranded: usize,
}

impl<'a> SideSearch<'a> {
    fn new(adj: &'a [Vec<(usize, usize)>], side: Vec<bool>, need: [[usize; 2]; 3]) -> Self {
        let n = adj.len();
        let mut t_deg = vec![0; n];
        let mut counts = [[0; 2]; 3];
        for v in 0..n {
            for &(u, l) in &adj[v] {
                if side[u] {
                    t_deg[v] += 1;
                }
                // each pair counted from its lower endpoint (self pairs once)
                if v <= u {
                    counts[Self::cat(side[v], side[u])][l] += 1;
                }
            }
        }
        let stranded = (0..n).filter(|&v| side[v] && t_deg[v] == 0).count();
        SideSearch { adj, side, t_deg, counts, need, stranded }
    }

    fn cat(a: bool, b: bool) -> usize {
        match (a, b) {
            (true, true) => TT,
            (false, false) => UU,
            _ => TU,
        }
    }

    fn cost_of(counts: &[[usize; 2]; 3], need: &[[usize; 2]; 3], stranded: usize) -> usize {
        let mut c = stranded;
        for k in 0..3 {
            for l in 0..2 {
                c += need[k][l].saturating_sub(counts[k][l]);
            }
        }
        c
    }

    fn cost(&self) -> usize {
        Self::cost_of(&self.counts, &self.need, self.stranded)
    }

    /// Cost change if protein `v` switched sides.
    fn flip_delta(&self, v: usize) -> isize {
        let s = self.side[v];
        let mut counts = self.counts;
        let mut stranded = self.stranded as isize;
        let mut v_tdeg = self.t_deg[v];
        for &(u, l) in &self.adj[v] {
            if u == v {
                counts[Self::cat(s, s)][l] -= 1;
                counts[Self::cat(!s, !s)][l] += 1;
                if s {
                    v_tdeg -= 1;
                } else {
                    v_tdeg += 1;
                }
                continue;
            }
            counts[Self::cat(s, self.side[u])][l] -= 1;
            counts[Self::cat(!s, self.side[u])][l] += 1;
            if self.side[u] {
                let d = self.t_deg[u];
                let d2 = if s { d - 1 } else { d + 1 };
                stranded += (d2 == 0) as isize - (d == 0) as isize;
            }
        }
        stranded += (!s && v_tdeg == 0) as isize - (s && self.t_deg[v] == 0) as isize;
        Self::cost_of(&counts, &self.need, stranded as usize) as isize - self.cost() as isize
    }

    fn flip(&mut self, v: usize) {
        let s = self.side[v];
        let was_stranded = s && self.t_deg[v] == 0;
        for &(u, l) in &self.adj[v] {
            if u == v {
                self.counts[Self::cat(s, s)][l] -= 1;
                self.counts[Self::cat(!s, !s)][l] += 1;
                if s {
                    self.t_deg[v] -= 1;
                } else {
                    self.t_deg[v] += 1;
                }
                continue;
            }
            self.counts[Self::cat(s, self.side[u])][l] -= 1;
            self.counts[Self::cat(!s, self.side[u])][l] += 1;
            let before = self.t_deg[u];
            self.t_deg[u] = if s { before - 1 } else { before + 1 };
            if self.side[u] {
                self.stranded = self.stranded + (self.t_deg[u] == 0) as usize - (before == 0) as usize;
            }
        }
        self.side[v] = !s;
        let now_stranded = !s && self.t_deg[v] == 0;
        self.stranded = self.stranded + now_stranded as usize - was_stranded as usize;
    }

    fn anneal(&mut self, rng: &mut ChaCha8Rng, sweeps: usize) {
        let n = self.adj.len();
        let (t0, t1) = (0.3f64, 0.02f64);
        let mut cost = self.cost() as isize;
        for sweep in 0..sweeps {
            let temp = t0 * (t1 / t0).powf(sweep as f64 / sweeps as f64);
            for _ in 0..n {
                if cost == 0 {
                    return;
                }
                let v = rng.gen_range(0..n);
                let d = self.flip_delta(v);
                if d <= 0 || rng.gen::<f64>() < (-(d as f64) / temp).exp() {
                    self.flip(v);
                    cost += d;
                }
            }
        }
    }
}

/// Annealing sweeps (one sweep = one move per protein).
const SWEEPS: usize = 100;
/// Small graphs get more sweeps; their landscapes are rugged and moves cheap.
const MIN_MOVES: usize = 200_000;

/// Partitions `all_pairs` into train and C1/C2/C3 test sets meeting the exact
/// per-label `targets`. Surplus pairs are left out. Deterministic in
/// (`all_pairs` order, `targets`, `seed`); on failure the error lists what was
/// reached, and another seed may succeed.
pub fn generate_split(
    all_pairs: &[InteractionRecord],
    targets: &SplitTargets,
    seed: u64,
) -> Result<SplitResult, SplitError> {
    let mut seen = HashSet::with_capacity(all_pairs.len());
    for r in all_pairs {
        if !seen.insert(r.pair()) {
            return Err(SplitError::DuplicatePair { a: r.a.clone(), b: r.b.clone() });
        }
    }
    if targets.total() > all_pairs.len() {
        return Err(SplitError::TargetsExceedPairs {
            requested: targets.total(),
            available: all_pairs.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<&InteractionRecord> = all_pairs.iter().collect();
    order.shuffle(&mut rng);

    // dense node indices in first-seen order of the shuffled pairs
    let mut index: HashMap<&ProteinId, usize> = HashMap::new();
    let mut edges = Vec::with_capacity(order.len());
    for &r in &order {
        let mut id = |p| {
            let next = index.len();
            *index.entry(p).or_insert(next)
        };
        let (a, b) = (id(&r.a), id(&r.b));
        edges.push((a, b, lab(r.label)));
    }
    let n = index.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(a, b, l) in &edges {
        adj[a].push((b, l));
        if a != b {
            adj[b].push((a, l));
        }
    }

    let need = [
        [
            targets.train.negatives + targets.c1.negatives,
            targets.train.positives + targets.c1.positives,
        ],
        [targets.c2.negatives, targets.c2.positives],
        [targets.c3.negatives, targets.c3.positives],
    ];
    let tt_share = (need[TT][0] + need[TT][1]) as f64 / targets.total().max(1) as f64;
    let p_train = tt_share.sqrt();
    let side: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < p_train).collect();
    let mut search = SideSearch::new(&adj, side, need);
    search.anneal(&mut rng, SWEEPS.max(MIN_MOVES / n.max(1)));
    let side = search.side;

    // train: first cover every train-side protein, then fill quotas
    let mut quota = [targets.train.negatives, targets.train.positives];
    let mut in_train = vec![false; edges.len()];
    let mut covered = vec![false; n];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(a, b, _)) in edges.iter().enumerate() {
        if side[a] && side[b] {
            inc[a].push(e);
            if a != b {
                inc[b].push(e);
            }
        }
    }
    for v in 0..n {
        if !side[v] || covered[v] {
            continue;
        }
        let usable = |&&e: &&usize| quota[edges[e].2] > 0 && !in_train[e];
        let other = |e: usize| if edges[e].0 == v { edges[e].1 } else { edges[e].0 };
        let pick = inc[v]
            .iter()
            .filter(usable)
            .find(|&&e| !covered[other(e)])
            .or_else(|| inc[v].iter().find(usable));
        if let Some(&e) = pick {
            in_train[e] = true;
            quota[edges[e].2] -= 1;
            covered[edges[e].0] = true;
            covered[edges[e].1] = true;
        }
    }
    for (e, &(a, b, l)) in edges.iter().enumerate() {
        if side[a] && side[b] && !in_train[e] && quota[l] > 0 {
            in_train[e] = true;
            quota[l] -= 1;
        }
    }

    let train_pairs: Vec<InteractionRecord> = order
        .iter()
        .zip(&in_train)
        .filter(|(_, &t)| t)
        .map(|(r, _)| (*r).clone())
        .collect();
    let train_nodes = nodes_of(&train_pairs);
    let node_set: HashSet<ProteinId> = train_nodes.iter().cloned().collect();
    let pair_set: HashSet<UnorderedPair> = train_pairs.iter().map(|r| r.pair()).collect();

    let mut achieved = SplitCounts {
        train: LabelCounts::of(&train_pairs),
        ..Default::default()
    };
    let mut classes: [Vec<InteractionRecord>; 3] = Default::default();
    for (r, _) in order.iter().zip(&in_train).filter(|(_, &t)| !t) {
        if let Classification::Test(class) = classify_pair(&r.pair(), &node_set, &pair_set) {
            let got = achieved.class_mut(class);
            if got.get(r.label) < targets.class(class).get(r.label) {
                got.bump(r.label);
                classes[class as usize].push((*r).clone());
            }
        }
    }

    if achieved != *targets {
        return Err(SplitError::Infeasible { achieved });
    }
    let [c1, c2, c3] = classes;
    Ok(SplitResult { train_pairs, train_nodes, c1, c2, c3, seed })
}

// ---------------------------------------------------------------------------
// synthetic graphs

/// Random labeled pair list with a hidden train side of `train_side`
/// proteins and `other_side` further proteins, holding exactly the pairs
/// `targets` needs: train+C1 pairs inside the train side, C2 pairs across,
/// C3 pairs outside. Every protein has at least one pair. Protein ids do not
/// reveal the side. Used to exercise [`generate_split`] at full scale.
pub fn planted_graph(
    targets: &SplitTargets,
    train_side: usize,
    other_side: usize,
    seed: u64,
) -> Vec<InteractionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..train_side + other_side).collect();
    ids.shuffle(&mut rng);
    let (t_nodes, u_nodes) = ids.split_at(train_side);

    let within = LabelCounts::new(
        targets.train.positives + targets.c1.positives,
        targets.train.negatives + targets.c1.negatives,
    );
    let mut used = HashSet::new();
    let mut out = Vec::new();
    for (xs, ys, wanted, cover) in [
        (t_nodes, t_nodes, within, true),
        (u_nodes, u_nodes, targets.c3, true),
        (t_nodes, u_nodes, targets.c2, false),
    ] {
        let edges = draw_edges(&mut rng, &mut used, xs, ys, wanted.total(), cover);
        let mut labels: Vec<Label> = std::iter::repeat(Label::Interacting)
            .take(wanted.positives)
            .chain(std::iter::repeat(Label::NonInteracting).take(wanted.negatives))
            .collect();
        labels.shuffle(&mut rng);
        out.extend(edges.into_iter().zip(labels));
    }
    out.shuffle(&mut rng);
    let name = |i: usize| ProteinId::new(format!("p{i:05}")).unwrap();
    out.into_iter()
        .map(|((a, b), l)| InteractionRecord::new(name(a), name(b), l))
        .collect()
}

/// `n` new distinct non-self pairs between `xs` and `ys`. With `cover`, the
/// first pairs join consecutive proteins of a shuffle of `xs`, so every
/// protein in `xs` is touched when `n` is large enough.
fn draw_edges(
    rng: &mut ChaCha8Rng,
    used: &mut HashSet<(usize, usize)>,
    xs: &[usize],
    ys: &[usize],
    n: usize,
    cover: bool,
) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n);
    let mut add = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
        if a != b && used.insert((a.min(b), a.max(b))) {
            edges.push((a, b));
        }
    };
    if cover && xs.len() > 1 {
        let mut order = xs.to_vec();
        order.shuffle(rng);
        for ch in order.chunks(2) {
            if edges.len() == n {
                break;
            }
            let b = if ch.len() == 2 { ch[1] } else { order[0] };
            add(ch[0], b, &mut edges);
        }
    }
    while edges.len() < n {
        let a = xs[rng.gen_range(0..xs.len())];
        let b = ys[rng.gen_range(0..ys.len())];
        add(a, b, &mut edges);
    }
    edges
}

// ---------------------------------------------------------------------------
// verification

/// Pairwise sequence identity (fraction in `[0, 1]`) between proteins.
pub type IdentityMap = HashMap<UnorderedPair, f64>;

/// Identity above which a train/test protein pair is reported.
pub const IDENTITY_THRESHOLD: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCheck {
    pub class: TestClass,
    pub ok: bool,
    /// Test pairs whose endpoint membership does not match the class.
    pub violations: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// No unordered pair appears in two sets (or twice in one).
    pub disjoint: bool,
    pub overlapping_pairs: Vec<(String, String)>,
    /// `train_nodes` is exactly the set of train endpoints.
    pub train_nodes_consistent: bool,
    pub classes: Vec<ClassCheck>,
    pub label_counts: SplitCounts,
    pub unique_nodes: UniqueNodes,
    /// Train/test protein pairs above the identity threshold, if an identity
    /// map was given.
    pub identity_warnings: Vec<(String, String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniqueNodes {
    pub train: usize,
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
    pub total: usize,
}

impl VerificationReport {
    /// All structural checks hold (identity warnings do not count).
    pub fn passed(&self) -> bool {
        self.disjoint && self.train_nodes_consistent && self.classes.iter().all(|c| c.ok)
    }

    pub fn meets(&self, targets: &SplitTargets) -> bool {
        self.label_counts == *targets
    }
}

fn pair_strings(p: &UnorderedPair) -> (String, String) {
    (p.first().to_string(), p.second().to_string())
}

pub fn verify_split(split: &SplitResult) -> VerificationReport {
    verify_split_with_identity(split, None)
}

pub fn verify_split_with_identity(split: &SplitResult, identity: Option<&IdentityMap>) -> VerificationReport {
    let sets: [&[InteractionRecord]; 4] = [&split.train_pairs, &split.c1, &split.c2, &split.c3];

    let mut seen = HashSet::new();
    let mut overlapping = BTreeSet::new();
    for set in sets {
        for r in set {
            let p = r.pair();
            if !seen.insert(p.clone()) {
                overlapping.insert(p);
            }
        }
    }

    let derived = nodes_of(&split.train_pairs);
    let train_nodes: HashSet<&ProteinId> = split.train_nodes.iter().collect();
    let classes = TestClass::ALL
        .iter()
        .map(|&class| {
            let expected = match class {
                TestClass::C1 => 2,
                TestClass::C2 => 1,
                TestClass::C3 => 0,
            };
            let violations: Vec<(String, String)> = split
                .class(class)
                .iter()
                .map(|r| r.pair())
                .filter(|p| {
                    train_nodes.contains(p.first()) as u8 + train_nodes.contains(p.second()) as u8
                        != expected
                })
                .map(|p| pair_strings(&p))
                .collect();
            ClassCheck { class, ok: violations.is_empty(), violations }
        })
        .collect();

    let mut identity_warnings = Vec::new();
    if let Some(map) = identity {
        let test_nodes: HashSet<ProteinId> = [&split.c1, &split.c2, &split.c3]
            .iter()
            .flat_map(|s| nodes_of(s))
            .filter(|id| !split.train_nodes.contains(id))
            .collect();
        let mut hits: Vec<_> = map
            .iter()
            .filter(|(_, &v)| v > IDENTITY_THRESHOLD)
            .filter(|(p, _)| {
                let (a, b) = (p.first(), p.second());
                (split.train_nodes.contains(a) && test_nodes.contains(b))
                    || (split.train_nodes.contains(b) && test_nodes.contains(a))
            })
            .map(|(p, &v)| (p.first().to_string(), p.second().to_string(), v))
            .collect();
        hits.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        identity_warnings = hits;
    }

    let all_nodes: BTreeSet<ProteinId> = sets.iter().flat_map(|s| nodes_of(s)).collect();
    VerificationReport {
        disjoint: overlapping.is_empty(),
        overlapping_pairs: overlapping.iter().map(pair_strings).collect(),
        train_nodes_consistent: derived == split.train_nodes,
        classes,
        label_counts: split.counts(),
        unique_nodes: UniqueNodes {
            train: derived.len(),
            c1: nodes_of(&split.c1).len(),
            c2: nodes_of(&split.c2).len(),
            c3: nodes_of(&split.c3).len(),
            total: all_nodes.len(),
        },
        identity_warnings,
    }
}
