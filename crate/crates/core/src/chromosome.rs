//! Session-sliced chromosome shared by both stages. Stage 1 stores course
//! ids per session, stage 2 stores classroom ids per session.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotChromosome<G> {
    sessions: Vec<Vec<G>>,
}

impl<G: Copy> SlotChromosome<G> {
    pub fn new(sessions: Vec<Vec<G>>) -> Self {
        Self { sessions }
    }

    pub fn sessions(&self) -> &[Vec<G>] {
        &self.sessions
    }

    pub fn sessions_mut(&mut self) -> &mut Vec<Vec<G>> {
        &mut self.sessions
    }

    pub fn into_sessions(self) -> Vec<Vec<G>> {
        self.sessions
    }

    pub fn session_count(&self) -> usize {
        self.sessions.len()
    }

    pub fn gene_count(&self) -> usize {
        self.sessions.iter().map(Vec::len).sum()
    }

    /// Flat gene sequence, session after session.
    pub fn genes(&self) -> impl Iterator<Item = G> + '_ {
        self.sessions.iter().flatten().copied()
    }

    /// Maps a flat position to `(session, offset)`.
    pub fn locate(&self, mut position: usize) -> Option<(usize, usize)> {
        for (s, genes) in self.sessions.iter().enumerate() {
            if position < genes.len() {
                return Some((s, position));
            }
            position -= genes.len();
        }
        None
    }

    /// Exchanges the genes at two flat positions. Out-of-range positions leave
    /// the chromosome untouched.
    pub fn swap_genes(&mut self, i: usize, j: usize) {
        let (Some((si, oi)), Some((sj, oj))) = (self.locate(i), self.locate(j)) else {
            return;
        };
        let gi = self.sessions[si][oi];
        self.sessions[si][oi] = self.sessions[sj][oj];
        self.sessions[sj][oj] = gi;
    }
}

/// Exchanges the session slots `lo..hi` between two parents. Slot contents move
/// whole, so lists of different lengths swap with their lengths.
pub fn exchange_sessions<G: Copy>(
    a: &SlotChromosome<G>,
    b: &SlotChromosome<G>,
    lo: usize,
    hi: usize,
) -> (SlotChromosome<G>, SlotChromosome<G>) {
    let n = a.session_count().min(b.session_count());
    let (lo, hi) = (lo.min(n), hi.min(n));
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    for s in lo..hi {
        c1.sessions[s] = b.sessions[s].clone();
        c2.sessions[s] = a.sessions[s].clone();
    }
    (c1, c2)
}

/// Two distinct cut points over the session boundaries `0..=session_count`,
/// returned in ascending order.
pub fn draw_session_cuts(session_count: usize, rng: &mut impl Rng) -> (usize, usize) {
    if session_count == 0 {
        return (0, 0);
    }
    let boundaries = session_count + 1;
    let x = rng.gen_range(0..boundaries);
    let mut y = rng.gen_range(0..boundaries - 1);
    if y >= x {
        y += 1;
    }
    (x.min(y), x.max(y))
}

/// Two distinct flat positions, or `None` when fewer than two genes exist.
pub fn draw_swap_positions(gene_count: usize, rng: &mut impl Rng) -> Option<(usize, usize)> {
    if gene_count < 2 {
        return None;
    }
    let i = rng.gen_range(0..gene_count);
    let mut j = rng.gen_range(0..gene_count - 1);
    if j >= i {
        j += 1;
    }
    Some((i, j))
}
