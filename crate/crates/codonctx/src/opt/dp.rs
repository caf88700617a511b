//! Unconstrained CPB optimization in linear time.
//!
//! Forward pass: for each position and each synonymous codon, keep the best
//! achievable prefix total ending in that codon plus a parent pointer; each
//! step examines at most 6 x 6 = 36 codon pairs. The same recursion run
//! backward yields, per (position, codon), the best achievable suffix total —
//! the admissible bound used by branch and bound.

use crate::scoring::CpsTable;
use crate::seq::{AminoAcidSeq, Codon, CodonSeq, GeneticCode};

use super::{Direction, OptMethod, OptimizationResult, SearchStats};

#[derive(Debug, Clone, Copy)]
struct Entry {
    total: f64,
    parent: Option<usize>,
}

/// The forward lattice: per position, one entry per synonymous codon.
#[derive(Debug, Clone)]
pub struct DpLattice {
    candidates: Vec<Vec<Codon>>,
    entries: Vec<Vec<Entry>>,
    direction: Direction,
    pair_evaluations: u64,
}

fn candidate_codons(protein: &AminoAcidSeq) -> Vec<Vec<Codon>> {
    let code = GeneticCode::standard();
    protein.residues().iter().map(|&aa| code.synonymous_codons(aa).to_vec()).collect()
}

impl DpLattice {
    /// Build the forward lattice for `protein`.
    pub fn build(protein: &AminoAcidSeq, table: &CpsTable, direction: Direction) -> DpLattice {
        assert!(protein.len() >= 2, "optimization requires at least two residues");
        let candidates = candidate_codons(protein);
        let mut entries: Vec<Vec<Entry>> = Vec::with_capacity(candidates.len());
        entries.push(vec![Entry { total: 0.0, parent: None }; candidates[0].len()]);
        let mut pair_evaluations = 0u64;
        for pos in 1..candidates.len() {
            let prev = &entries[pos - 1];
            let row = candidates[pos]
                .iter()
                .map(|&codon| {
                    let mut best: Option<Entry> = None;
                    for (slot, &parent_codon) in candidates[pos - 1].iter().enumerate() {
                        let total = prev[slot].total + table.score(parent_codon, codon);
                        pair_evaluations += 1;
                        // Strict improvement only: parents are scanned in
                        // lexicographic order, so ties keep the smallest.
                        if best.is_none() || direction.better(total, best.unwrap().total) {
                            best = Some(Entry { total, parent: Some(slot) });
                        }
                    }
                    best.expect("every amino acid has at least one codon")
                })
                .collect();
            entries.push(row);
        }
        DpLattice { candidates, entries, direction, pair_evaluations }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn candidates(&self, pos: usize) -> &[Codon] {
        &self.candidates[pos]
    }

    /// Best total score of any prefix ending at (pos, slot).
    pub fn prefix_total(&self, pos: usize, slot: usize) -> f64 {
        self.entries[pos][slot].total
    }

    /// Winning slot in the final row and its total.
    pub fn best_final(&self) -> (usize, f64) {
        let last = self.entries.last().unwrap();
        let mut best = 0;
        for slot in 1..last.len() {
            if self.direction.better(last[slot].total, last[best].total) {
                best = slot;
            }
        }
        (best, last[best].total)
    }

    /// Reconstruct the codon sequence ending at `final_slot`.
    pub fn backtrack(&self, final_slot: usize) -> Vec<Codon> {
        let mut codons = Vec::with_capacity(self.len());
        let mut slot = final_slot;
        for pos in (0..self.len()).rev() {
            codons.push(self.candidates[pos][slot]);
            if let Some(parent) = self.entries[pos][slot].parent {
                slot = parent;
            }
        }
        codons.reverse();
        codons
    }
}

/// Globally optimal CPB over all synonymous encodings of `protein`.
pub fn optimize_unconstrained(
    protein: &AminoAcidSeq,
    table: &CpsTable,
    direction: Direction,
) -> OptimizationResult {
    let lattice = DpLattice::build(protein, table, direction);
    let (final_slot, total) = lattice.best_final();
    let sequence = CodonSeq::new(lattice.backtrack(final_slot)).expect("sense codons only");
    OptimizationResult {
        cpb: total / sequence.n_pairs() as f64,
        total_score: total,
        sequence,
        method: OptMethod::UnconstrainedDp,
        direction,
        optimal: true,
        stats: SearchStats { pair_evaluations: lattice.pair_evaluations, ..Default::default() },
    }
}

/// Per-(position, codon) optimal total score over all synonymous suffix
/// completions starting at that codon; the final position bounds are zero.
#[derive(Debug, Clone)]
pub struct SuffixBounds {
    candidates: Vec<Vec<Codon>>,
    totals: Vec<Vec<f64>>,
}

impl SuffixBounds {
    pub fn build(protein: &AminoAcidSeq, table: &CpsTable, direction: Direction) -> SuffixBounds {
        assert!(protein.len() >= 2, "optimization requires at least two residues");
        let candidates = candidate_codons(protein);
        let n = candidates.len();
        let mut totals = vec![Vec::new(); n];
        totals[n - 1] = vec![0.0; candidates[n - 1].len()];
        for pos in (0..n - 1).rev() {
            totals[pos] = candidates[pos]
                .iter()
                .map(|&codon| {
                    let mut best: Option<f64> = None;
                    for (slot, &next_codon) in candidates[pos + 1].iter().enumerate() {
                        let total = table.score(codon, next_codon) + totals[pos + 1][slot];
                        if best.is_none() || direction.better(total, best.unwrap()) {
                            best = Some(total);
                        }
                    }
                    best.unwrap()
                })
                .collect();
        }
        SuffixBounds { candidates, totals }
    }

    /// Bound for completing positions `pos..` having placed `codon` at `pos`.
    /// Panics if `codon` is not synonymous at that position.
    pub fn bound(&self, pos: usize, codon: Codon) -> f64 {
        let slot = self.candidates[pos]
            .iter()
            .position(|&c| c == codon)
            .expect("codon not synonymous at this position");
        self.totals[pos][slot]
    }

    pub fn bound_slot(&self, pos: usize, slot: usize) -> f64 {
        self.totals[pos][slot]
    }

    pub fn candidates(&self, pos: usize) -> &[Codon] {
        &self.candidates[pos]
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Build the suffix-bound table for `protein`.
pub fn suffix_bounds(protein: &AminoAcidSeq, table: &CpsTable, direction: Direction) -> SuffixBounds {
    SuffixBounds::build(protein, table, direction)
}
