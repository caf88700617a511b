//! Exact CPB optimization under a fixed codon distribution.
//!
//! Two exact searches over the synonymous encodings that realize a required
//! codon multiset: a dynamic program whose state is (position, last codon,
//! residual counts) — polynomial but explosive, so size-capped — and a
//! depth-first branch and bound that prunes with the unconstrained
//! suffix-optimum table. A plain enumerator serves as the test oracle.

use std::collections::HashMap;

use thiserror::Error;

use crate::scoring::{total_pair_score, CpsTable};
use crate::seq::{
    AminoAcid, AminoAcidSeq, Codon, CodonDistribution, CodonSeq, DistributionError, GeneticCode,
};

use super::dp::SuffixBounds;
use super::sa::{optimize_sa, SaParams};
use super::{Direction, OptMethod, OptimizationResult, SearchStats};

/// Default ceiling on materialized DP states.
pub const DEFAULT_STATE_CAP: u64 = 5_000_000;

/// Ceiling on encodings the enumerator will list.
pub const ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("estimated {estimate} DP states exceeds the cap of {cap}")]
    StateCapExceeded { estimate: u128, cap: u64 },
    #[error("{count} encodings exceeds the enumeration cap of {cap}")]
    EncodingCountExceeded { count: u128, cap: u128 },
    #[error("incumbent does not encode the protein under the given distribution")]
    InvalidIncumbent,
    #[error("node budget exhausted before any complete encoding was found")]
    BudgetExhaustedWithoutSolution,
    #[error(transparent)]
    Sa(#[from] super::sa::SaError),
}

impl FixedError {
    /// Whether this is a resource-cap refusal rather than a data error.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            FixedError::StateCapExceeded { .. } | FixedError::EncodingCountExceeded { .. }
        )
    }
}

// ---------------------------------------------------------------------------
// Shared search scaffolding
// ---------------------------------------------------------------------------

/// Candidate codons (those with nonzero count in the distribution) per
/// position, plus the initial residual counts laid out per candidate list.
struct SearchSpace {
    /// Distinct codons with nonzero count, lexicographic.
    codons: Vec<Codon>,
    /// Initial residual count per entry of `codons`.
    initial: Vec<u16>,
    /// Per position: indices into `codons` that are synonymous there.
    position_slots: Vec<Vec<usize>>,
}

impl SearchSpace {
    fn build(
        protein: &AminoAcidSeq,
        dist: &CodonDistribution,
    ) -> Result<SearchSpace, DistributionError> {
        let code = GeneticCode::standard();
        dist.check_consistent(protein, code)?;
        let codons: Vec<Codon> = dist.iter().map(|(c, _)| c).collect();
        let initial: Vec<u16> = dist.iter().map(|(_, n)| n as u16).collect();
        let slot_of: HashMap<Codon, usize> =
            codons.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let position_slots = protein
            .residues()
            .iter()
            .map(|&aa| {
                code.synonymous_codons(aa)
                    .iter()
                    .filter_map(|c| slot_of.get(c).copied())
                    .collect()
            })
            .collect();
        Ok(SearchSpace { codons, initial, position_slots })
    }

    fn len(&self) -> usize {
        self.position_slots.len()
    }
}

// ---------------------------------------------------------------------------
// Enumeration oracle
// ---------------------------------------------------------------------------

/// Number of distinct encodings: the product over amino acids of the
/// multinomial (positions; codon counts).
fn encoding_count(protein: &AminoAcidSeq, dist: &CodonDistribution) -> u128 {
    let code = GeneticCode::standard();
    let mut count: u128 = 1;
    for (aa, positions) in protein.residue_counts() {
        let mut remaining = positions as u128;
        // positions! / prod(count_c!) computed as a product of binomials.
        for (_, n) in dist.codons_of(aa, code) {
            count = count.saturating_mul(binomial(remaining, n as u128));
            remaining -= n as u128;
        }
    }
    count
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
    }
    result
}

/// Every distinct encoding consistent with `dist`, each with its exact CPB,
/// in lexicographic codon order.
pub fn enumerate_all(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    table: &CpsTable,
) -> Result<Vec<(CodonSeq, f64)>, FixedError> {
    let space = SearchSpace::build(protein, dist)?;
    assert!(space.len() >= 2, "optimization requires at least two residues");
    let count = encoding_count(protein, dist);
    if count > ENUMERATION_CAP {
        return Err(FixedError::EncodingCountExceeded { count, cap: ENUMERATION_CAP });
    }
    let mut results = Vec::with_capacity(count as usize);
    let mut remaining = space.initial.clone();
    let mut path: Vec<Codon> = Vec::with_capacity(space.len());
    enumerate_rec(&space, table, &mut remaining, &mut path, &mut results);
    debug_assert_eq!(results.len() as u128, count);
    Ok(results)
}

fn enumerate_rec(
    space: &SearchSpace,
    table: &CpsTable,
    remaining: &mut Vec<u16>,
    path: &mut Vec<Codon>,
    results: &mut Vec<(CodonSeq, f64)>,
) {
    let pos = path.len();
    if pos == space.len() {
        let seq = CodonSeq::new(path.clone()).expect("sense codons only");
        let cpb = total_pair_score(seq.codons(), table) / seq.n_pairs() as f64;
        results.push((seq, cpb));
        return;
    }
    for &slot in &space.position_slots[pos] {
        if remaining[slot] == 0 {
            continue;
        }
        remaining[slot] -= 1;
        path.push(space.codons[slot]);
        enumerate_rec(space, table, remaining, path, results);
        path.pop();
        remaining[slot] += 1;
    }
}

// ---------------------------------------------------------------------------
// Multiset-state dynamic program
// ---------------------------------------------------------------------------

/// Upper bound on the states the DP would materialize, summed per position:
/// (candidate codons at the position) x (residual-count vectors reachable
/// after it). Used to refuse oversized instances before allocating.
pub fn estimate_state_count(protein: &AminoAcidSeq, dist: &CodonDistribution) -> u128 {
    let code = GeneticCode::standard();
    // ways[aa][j]: number of distinct consumed-count vectors after drawing j
    // codons of this amino acid from its pools.
    let mut ways: HashMap<AminoAcid, Vec<u128>> = HashMap::new();
    for (aa, positions) in protein.residue_counts() {
        let pools: Vec<u16> = dist.codons_of(aa, code).iter().map(|&(_, n)| n as u16).collect();
        let mut table = vec![0u128; positions + 1];
        table[0] = 1;
        for &pool in &pools {
            let mut next = vec![0u128; positions + 1];
            for j in 0..=positions {
                if table[j] == 0 {
                    continue;
                }
                for take in 0..=(pool as usize).min(positions - j) {
                    next[j + take] = next[j + take].saturating_add(table[j]);
                }
            }
            table = next;
        }
        ways.insert(aa, table);
    }
    let mut consumed: HashMap<AminoAcid, usize> = HashMap::new();
    let mut estimate: u128 = 0;
    for &aa in protein.residues() {
        *consumed.entry(aa).or_insert(0) += 1;
        let candidates = dist.codons_of(aa, code).len() as u128;
        let mut vectors: u128 = 1;
        for (&other, table) in &ways {
            let j = consumed.get(&other).copied().unwrap_or(0);
            vectors = vectors.saturating_mul(table[j]);
        }
        estimate = estimate.saturating_add(candidates.saturating_mul(vectors));
    }
    estimate
}

/// DP state key: the codon placed at the current position plus the residual
/// counts of the tracked codons (per amino acid, all nonzero-count codons
/// except the last — the dropped one is implied by the position).
#[derive(Clone, PartialEq, Eq, Hash)]
struct StateKey {
    last_slot: u16,
    tracked: Vec<u16>,
}

struct StateRec {
    key: StateKey,
    total: f64,
    parent: u32,
}

/// Globally optimal CPB among encodings with exactly the codon counts of
/// `dist`, by dynamic programming over (position, last codon, residual
/// counts). Refuses instances whose estimated state count exceeds
/// `state_cap`.
pub fn optimize_exact_dp(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    table: &CpsTable,
    direction: Direction,
    state_cap: u64,
) -> Result<OptimizationResult, FixedError> {
    let space = SearchSpace::build(protein, dist)?;
    assert!(space.len() >= 2, "optimization requires at least two residues");
    let estimate = estimate_state_count(protein, dist);
    if estimate > state_cap as u128 {
        return Err(FixedError::StateCapExceeded { estimate, cap: state_cap });
    }

    // Tracked slots: per amino acid with k >= 2 candidate codons, all but the
    // lexicographically last; the dropped residual is implied.
    let code = GeneticCode::standard();
    let mut tracked_slots: Vec<usize> = Vec::new();
    for aa in AminoAcid::all() {
        let slots: Vec<usize> = space
            .codons
            .iter()
            .enumerate()
            .filter(|&(_, &c)| code.amino_acid(c) == Some(aa))
            .map(|(i, _)| i)
            .collect();
        if slots.len() >= 2 {
            tracked_slots.extend(&slots[..slots.len() - 1]);
        }
    }
    let tracked_index: HashMap<usize, usize> =
        tracked_slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let initial_tracked: Vec<u16> = tracked_slots.iter().map(|&s| space.initial[s]).collect();

    // Residual count of `slot` in a state at `pos` (positions 0..=pos placed).
    let residual = |key: &StateKey, per_aa_left: &[u16], slot: usize| -> u16 {
        if let Some(&t) = tracked_index.get(&slot) {
            key.tracked[t]
        } else {
            // Untracked slot: the amino acid's remaining total minus its
            // tracked residuals.
            let aa = code.amino_acid(space.codons[slot]).unwrap();
            let mut left = per_aa_left[aa.index()];
            for (&s, &t) in &tracked_index {
                if code.amino_acid(space.codons[s]) == Some(aa) {
                    left -= key.tracked[t];
                }
            }
            left
        }
    };

    // Remaining positions of each amino acid after position i.
    let n = space.len();
    let mut aa_left = vec![[0u16; 20]; n + 1];
    for pos in (0..n).rev() {
        aa_left[pos] = aa_left[pos + 1];
        aa_left[pos][protein.residues()[pos].index()] += 1;
    }

    let mut layers: Vec<Vec<StateRec>> = Vec::with_capacity(n);
    let mut states_total: u64 = 0;
    let mut pair_evaluations: u64 = 0;

    // Position 0.
    let mut layer: Vec<StateRec> = Vec::new();
    let mut index: HashMap<StateKey, u32> = HashMap::new();
    for &slot in &space.position_slots[0] {
        if space.initial[slot] == 0 {
            continue;
        }
        let mut tracked = initial_tracked.clone();
        if let Some(&t) = tracked_index.get(&slot) {
            tracked[t] -= 1;
        }
        let key = StateKey { last_slot: slot as u16, tracked };
        index.insert(key.clone(), layer.len() as u32);
        layer.push(StateRec { key, total: 0.0, parent: u32::MAX });
    }
    states_total += layer.len() as u64;
    layers.push(layer);

    #[allow(clippy::needless_range_loop)]
    for pos in 1..n {
        let prev = layers.last().unwrap();
        let mut layer: Vec<StateRec> = Vec::new();
        let mut index: HashMap<StateKey, u32> = HashMap::new();
        for (prev_idx, state) in prev.iter().enumerate() {
            for &slot in &space.position_slots[pos] {
                if residual(&state.key, &aa_left[pos], slot) == 0 {
                    continue;
                }
                let mut tracked = state.key.tracked.clone();
                if let Some(&t) = tracked_index.get(&slot) {
                    tracked[t] -= 1;
                }
                let key = StateKey { last_slot: slot as u16, tracked };
                let total = state.total
                    + table.score(
                        space.codons[state.key.last_slot as usize],
                        space.codons[slot],
                    );
                pair_evaluations += 1;
                match index.get(&key) {
                    Some(&existing) => {
                        // Strictly better replaces; ties keep the earlier
                        // (deterministic insertion order).
                        let rec = &mut layer[existing as usize];
                        if direction.better(total, rec.total) {
                            rec.total = total;
                            rec.parent = prev_idx as u32;
                        }
                    }
                    None => {
                        index.insert(key.clone(), layer.len() as u32);
                        layer.push(StateRec { key, total, parent: prev_idx as u32 });
                    }
                }
            }
        }
        states_total += layer.len() as u64;
        if states_total > state_cap {
            return Err(FixedError::StateCapExceeded { estimate, cap: state_cap });
        }
        layers.push(layer);
    }

    // Best final state; scan order is deterministic.
    let last = layers.last().unwrap();
    let mut best = 0usize;
    for i in 1..last.len() {
        if direction.better(last[i].total, last[best].total) {
            best = i;
        }
    }
    let total = last[best].total;
    let mut codons = Vec::with_capacity(n);
    let mut idx = best as u32;
    for pos in (0..n).rev() {
        let rec = &layers[pos][idx as usize];
        codons.push(space.codons[rec.key.last_slot as usize]);
        idx = rec.parent;
    }
    codons.reverse();
    let sequence = CodonSeq::new(codons).expect("sense codons only");
    debug_assert_eq!(sequence.distribution(), *dist);
    Ok(OptimizationResult {
        cpb: total / sequence.n_pairs() as f64,
        total_score: total,
        sequence,
        method: OptMethod::ExactDp,
        direction,
        optimal: true,
        stats: SearchStats {
            states: states_total,
            pair_evaluations,
            ..Default::default()
        },
    })
}

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

/// Starting bound when no incumbent is supplied.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialIncumbent {
    /// One simulated-annealing run with the given parameters.
    SimulatedAnnealing(SaParams),
    /// Start from an unbounded incumbent (the worst representable value).
    None,
}

#[derive(Debug, Clone)]
pub struct BnbOptions {
    pub node_budget: Option<u64>,
    /// Used only when no explicit incumbent is passed.
    pub initial: InitialIncumbent,
    /// Disable to explore the full tree (testing aid).
    pub prune: bool,
}

impl Default for BnbOptions {
    fn default() -> Self {
        BnbOptions {
            node_budget: None,
            initial: InitialIncumbent::SimulatedAnnealing(SaParams::default()),
            prune: true,
        }
    }
}

/// Slack absorbing float reassociation between `prefix + suffix bound` and
/// the left-to-right path sum; pruning strictly below this margin can never
/// cut an optimal (or tied) completion.
const PRUNE_EPS: f64 = 1e-9;

struct BnbContext<'a> {
    space: &'a SearchSpace,
    table: &'a CpsTable,
    bounds: &'a SuffixBounds,
    direction: Direction,
    prune: bool,
    node_budget: Option<u64>,
    nodes_expanded: u64,
    nodes_pruned: u64,
    pair_evaluations: u64,
    best_total: f64,
    best_path: Option<Vec<Codon>>,
    budget_exhausted: bool,
}

impl BnbContext<'_> {
    fn beats_bound(&self, potential: f64) -> bool {
        match self.direction {
            Direction::Maximize => potential >= self.best_total - PRUNE_EPS,
            Direction::Minimize => potential <= self.best_total + PRUNE_EPS,
        }
    }

    fn dfs(&mut self, pos: usize, prefix_total: f64, remaining: &mut Vec<u16>, path: &mut Vec<Codon>) {
        if self.budget_exhausted {
            return;
        }
        if let Some(budget) = self.node_budget {
            if self.nodes_expanded >= budget {
                self.budget_exhausted = true;
                return;
            }
        }
        self.nodes_expanded += 1;
        if pos == self.space.len() {
            if self.direction.better(prefix_total, self.best_total) {
                self.best_total = prefix_total;
                self.best_path = Some(path.clone());
            }
            return;
        }
        // Children ordered best-first by pair score plus suffix bound;
        // ties stay in lexicographic codon order (stable sort).
        let mut children: Vec<(usize, f64)> = Vec::with_capacity(6);
        for &slot in &self.space.position_slots[pos] {
            if remaining[slot] == 0 {
                continue;
            }
            let codon = self.space.codons[slot];
            let step = match path.last() {
                Some(&prev) => {
                    self.pair_evaluations += 1;
                    self.table.score(prev, codon)
                }
                None => 0.0,
            };
            let potential = prefix_total + step + self.bounds.bound(pos, codon);
            children.push((slot, potential));
        }
        match self.direction {
            Direction::Maximize => {
                children.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap())
            }
            Direction::Minimize => {
                children.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            }
        }
        for (slot, potential) in children {
            if self.prune && !self.beats_bound(potential) {
                self.nodes_pruned += 1;
                continue;
            }
            let codon = self.space.codons[slot];
            let step = match path.last() {
                Some(&prev) => self.table.score(prev, codon),
                None => 0.0,
            };
            remaining[slot] -= 1;
            path.push(codon);
            self.dfs(pos + 1, prefix_total + step, remaining, path);
            path.pop();
            remaining[slot] += 1;
            if self.budget_exhausted {
                return;
            }
        }
    }
}

/// Exact optimum under `dist` by depth-first branch and bound. A provided
/// `incumbent` (or, by default, a fresh simulated-annealing run) seeds the
/// pruning threshold; pruning cuts children whose prefix-plus-suffix-bound
/// potential is strictly worse than the best total found so far.
pub fn optimize_bnb(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    table: &CpsTable,
    direction: Direction,
    incumbent: Option<&OptimizationResult>,
    options: &BnbOptions,
) -> Result<OptimizationResult, FixedError> {
    let space = SearchSpace::build(protein, dist)?;
    assert!(space.len() >= 2, "optimization requires at least two residues");
    let bounds = SuffixBounds::build(protein, table, direction);
    let code = GeneticCode::standard();

    let (mut best_total, mut best_path) = (direction.worst(), None);
    match incumbent {
        Some(result) => {
            if result.sequence.translate(code) != *protein || result.sequence.distribution() != *dist
            {
                return Err(FixedError::InvalidIncumbent);
            }
            // Recompute against this table so the threshold is comparable to
            // path sums even if the incumbent came from elsewhere.
            best_total = total_pair_score(result.sequence.codons(), table);
            best_path = Some(result.sequence.codons().to_vec());
        }
        None => {
            if let InitialIncumbent::SimulatedAnnealing(params) = &options.initial {
                let (result, _) = optimize_sa(protein, dist, table, direction, params)?;
                best_total = total_pair_score(result.sequence.codons(), table);
                best_path = Some(result.sequence.codons().to_vec());
            }
        }
    }

    let mut ctx = BnbContext {
        space: &space,
        table,
        bounds: &bounds,
        direction,
        prune: options.prune,
        node_budget: options.node_budget,
        nodes_expanded: 0,
        nodes_pruned: 0,
        pair_evaluations: 0,
        best_total,
        best_path,
        budget_exhausted: false,
    };
    let mut remaining = space.initial.clone();
    let mut path = Vec::with_capacity(space.len());
    ctx.dfs(0, 0.0, &mut remaining, &mut path);

    let best_path = ctx.best_path.ok_or(FixedError::BudgetExhaustedWithoutSolution)?;
    let total = total_pair_score(&best_path, table);
    let sequence = CodonSeq::new(best_path).expect("sense codons only");
    debug_assert_eq!(sequence.distribution(), *dist);
    Ok(OptimizationResult {
        cpb: total / sequence.n_pairs() as f64,
        total_score: total,
        sequence,
        method: OptMethod::BranchAndBound,
        direction,
        optimal: !ctx.budget_exhausted,
        stats: SearchStats {
            nodes_expanded: ctx.nodes_expanded,
            nodes_pruned: ctx.nodes_pruned,
            pair_evaluations: ctx.pair_evaluations,
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::LogBase;
    use crate::test_support::{random_distribution, random_protein, random_table};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn codon(s: &str) -> Codon {
        s.parse().unwrap()
    }

    fn dist(pairs: &[(&str, usize)]) -> CodonDistribution {
        CodonDistribution::from_counts(pairs.iter().map(|&(c, n)| (codon(c), n))).unwrap()
    }

    fn kk_table() -> CpsTable {
        CpsTable::from_scores(
            [
                ((codon("AAA"), codon("AAG")), 3.0),
                ((codon("AAG"), codon("AAA")), 1.0),
            ],
            LogBase::Natural,
            "kk",
        )
        .unwrap()
    }

    #[test]
    fn enumerate_counts_match_multinomials() {
        let table = CpsTable::zeroed();
        let protein: AminoAcidSeq = "KK".parse().unwrap();
        let d = dist(&[("AAA", 1), ("AAG", 1)]);
        assert_eq!(enumerate_all(&protein, &d, &table).unwrap().len(), 2);

        let protein: AminoAcidSeq = "KKK".parse().unwrap();
        let d = dist(&[("AAA", 2), ("AAG", 1)]);
        assert_eq!(enumerate_all(&protein, &d, &table).unwrap().len(), 3);

        let protein: AminoAcidSeq = "KK".parse().unwrap();
        let d = dist(&[("AAA", 2)]);
        assert_eq!(enumerate_all(&protein, &d, &table).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_cap_enforced() {
        // 20 lysines split 10/10: C(20,10) = 184756 fits, but a larger split
        // must refuse. Use 30 positions split 15/15: C(30,15) = 155117520.
        let protein = AminoAcidSeq::new(vec![AminoAcid::from_letter('K').unwrap(); 30]);
        let d = dist(&[("AAA", 15), ("AAG", 15)]);
        let err = enumerate_all(&protein, &d, &CpsTable::zeroed()).unwrap_err();
        assert!(matches!(err, FixedError::EncodingCountExceeded { count: 155117520, .. }));
    }

    #[test]
    fn exact_dp_two_permutations() {
        let protein: AminoAcidSeq = "KK".parse().unwrap();
        let d = dist(&[("AAA", 1), ("AAG", 1)]);
        let result =
            optimize_exact_dp(&protein, &d, &kk_table(), Direction::Maximize, DEFAULT_STATE_CAP)
                .unwrap();
        assert_eq!(result.sequence.to_nucleotides(), "AAAAAG");
        assert_eq!(result.cpb, 3.0);
        let min =
            optimize_exact_dp(&protein, &d, &kk_table(), Direction::Minimize, DEFAULT_STATE_CAP)
                .unwrap();
        assert_eq!(min.sequence.to_nucleotides(), "AAGAAA");
        assert_eq!(min.cpb, 1.0);
    }

    #[test]
    fn forced_distribution_returns_unique_encoding() {
        let protein: AminoAcidSeq = "KNK".parse().unwrap();
        let d = dist(&[("AAA", 2), ("AAT", 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let table = random_table(&mut rng);
        let result =
            optimize_exact_dp(&protein, &d, &table, Direction::Maximize, DEFAULT_STATE_CAP)
                .unwrap();
        assert_eq!(result.sequence.to_nucleotides(), "AAAAATAAA");
        assert_eq!(result.cpb, crate::scoring::cpb(&result.sequence, &table));
    }

    #[test]
    fn state_cap_refusal_reports_estimate() {
        let protein = AminoAcidSeq::new(vec![AminoAcid::from_letter('L').unwrap(); 60]);
        let d = dist(&[("CTA", 10), ("CTC", 10), ("CTG", 10), ("CTT", 10), ("TTA", 10), ("TTG", 10)]);
        let err = optimize_exact_dp(
            &protein,
            &d,
            &CpsTable::zeroed(),
            Direction::Maximize,
            10_000,
        )
        .unwrap_err();
        match err {
            FixedError::StateCapExceeded { estimate, cap } => {
                assert!(estimate > 10_000);
                assert_eq!(cap, 10_000);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn exact_methods_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..60 {
            let len = 3 + trial % 8;
            let protein = random_protein(&mut rng, len);
            let d = random_distribution(&mut rng, &protein);
            let table = random_table(&mut rng);
            for direction in [Direction::Maximize, Direction::Minimize] {
                let best_enum = enumerate_all(&protein, &d, &table)
                    .unwrap()
                    .into_iter()
                    .map(|(_, c)| c)
                    .fold(direction.worst(), |a, v| if direction.better(v, a) { v } else { a });
                let dp = optimize_exact_dp(&protein, &d, &table, direction, DEFAULT_STATE_CAP)
                    .unwrap();
                let bnb = optimize_bnb(
                    &protein,
                    &d,
                    &table,
                    direction,
                    None,
                    &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
                )
                .unwrap();
                assert_eq!(dp.cpb, best_enum, "exact DP vs enumeration");
                assert_eq!(bnb.cpb, best_enum, "BnB vs enumeration");
                assert_eq!(dp.sequence.distribution(), d);
                assert_eq!(bnb.sequence.distribution(), d);
            }
        }
    }

    #[test]
    fn incumbent_tightens_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut improved_somewhere = false;
        for _ in 0..20 {
            let protein = random_protein(&mut rng, 9);
            let d = random_distribution(&mut rng, &protein);
            let table = random_table(&mut rng);
            let exact =
                optimize_exact_dp(&protein, &d, &table, Direction::Maximize, DEFAULT_STATE_CAP)
                    .unwrap();
            let cold = optimize_bnb(
                &protein,
                &d,
                &table,
                Direction::Maximize,
                None,
                &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
            )
            .unwrap();
            let warm = optimize_bnb(
                &protein,
                &d,
                &table,
                Direction::Maximize,
                Some(&exact),
                &BnbOptions::default(),
            )
            .unwrap();
            assert_eq!(warm.cpb, exact.cpb);
            assert!(warm.stats.nodes_expanded <= cold.stats.nodes_expanded);
            if warm.stats.nodes_expanded < cold.stats.nodes_expanded {
                improved_somewhere = true;
            }
        }
        assert!(improved_somewhere, "an optimal incumbent never reduced the node count");
    }

    #[test]
    fn invalid_incumbent_rejected() {
        let protein: AminoAcidSeq = "KK".parse().unwrap();
        let d = dist(&[("AAA", 1), ("AAG", 1)]);
        let table = kk_table();
        let other = optimize_exact_dp(
            &"KK".parse().unwrap(),
            &dist(&[("AAA", 2)]),
            &table,
            Direction::Maximize,
            DEFAULT_STATE_CAP,
        )
        .unwrap();
        let err = optimize_bnb(
            &protein,
            &d,
            &table,
            Direction::Maximize,
            Some(&other),
            &BnbOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, FixedError::InvalidIncumbent);
    }

    #[test]
    fn pruning_never_changes_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let protein = random_protein(&mut rng, 8);
            let d = random_distribution(&mut rng, &protein);
            let table = random_table(&mut rng);
            let pruned = optimize_bnb(
                &protein,
                &d,
                &table,
                Direction::Maximize,
                None,
                &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
            )
            .unwrap();
            let unpruned = optimize_bnb(
                &protein,
                &d,
                &table,
                Direction::Maximize,
                None,
                &BnbOptions {
                    initial: InitialIncumbent::None,
                    prune: false,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(pruned.cpb, unpruned.cpb);
            assert!(pruned.stats.nodes_expanded <= unpruned.stats.nodes_expanded);
        }
    }

    #[test]
    fn suffix_bound_is_admissible() {
        // The unconstrained suffix optimum must dominate every constrained
        // completion reachable from any node.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let protein = random_protein(&mut rng, 6);
            let d = random_distribution(&mut rng, &protein);
            let table = random_table(&mut rng);
            let bounds = SuffixBounds::build(&protein, &table, Direction::Maximize);
            for (seq, _) in enumerate_all(&protein, &d, &table).unwrap() {
                for pos in 0..seq.len() {
                    let suffix_total =
                        total_pair_score(&seq.codons()[pos..], &table);
                    let bound = bounds.bound(pos, seq.codons()[pos]);
                    assert!(
                        bound >= suffix_total - 1e-9,
                        "bound {bound} below achievable {suffix_total}"
                    );
                }
            }
        }
    }

    #[test]
    fn unconstrained_dominates_constrained() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let protein = random_protein(&mut rng, 8);
            let d = random_distribution(&mut rng, &protein);
            let table = random_table(&mut rng);
            let free = super::super::dp::optimize_unconstrained(
                &protein,
                &table,
                Direction::Maximize,
            );
            let constrained = optimize_bnb(
                &protein,
                &d,
                &table,
                Direction::Maximize,
                None,
                &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
            )
            .unwrap();
            assert!(free.cpb >= constrained.cpb - 1e-12);
            // And any random encoding is dominated by the constrained optimum.
            let sample =
                crate::seq::random_synonymous_encoding(&protein, &d, 5).unwrap();
            assert!(constrained.cpb >= crate::scoring::cpb(&sample, &table) - 1e-12);
        }
    }

    #[test]
    fn node_budget_returns_best_so_far() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let protein = random_protein(&mut rng, 10);
        let d = random_distribution(&mut rng, &protein);
        let table = random_table(&mut rng);
        let full = optimize_bnb(
            &protein,
            &d,
            &table,
            Direction::Maximize,
            None,
            &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
        )
        .unwrap();
        let warm = optimize_bnb(
            &protein,
            &d,
            &table,
            Direction::Maximize,
            Some(&full),
            &BnbOptions::default(),
        )
        .unwrap();
        assert!(
            warm.stats.nodes_expanded > 12,
            "instance too small to exercise the budget"
        );
        let truncated = optimize_bnb(
            &protein,
            &d,
            &table,
            Direction::Maximize,
            Some(&full),
            &BnbOptions { node_budget: Some(12), ..Default::default() },
        )
        .unwrap();
        assert!(!truncated.optimal);
        assert!(truncated.stats.nodes_expanded <= 12);
        assert_eq!(truncated.cpb, full.cpb); // incumbent carried through
    }

    #[test]
    fn budget_without_incumbent_can_fail() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let protein = random_protein(&mut rng, 12);
        let d = random_distribution(&mut rng, &protein);
        let table = random_table(&mut rng);
        let err = optimize_bnb(
            &protein,
            &d,
            &table,
            Direction::Maximize,
            None,
            &BnbOptions {
                initial: InitialIncumbent::None,
                node_budget: Some(3),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert_eq!(err, FixedError::BudgetExhaustedWithoutSolution);
    }
}
