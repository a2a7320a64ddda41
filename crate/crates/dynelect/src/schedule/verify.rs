//! Brute-force verification of the bounded-communication-diameter guarantee.

use super::Schedule;
use crate::protocol::NodeId;

/// A witness that the D-round flooding guarantee fails: a token flooded from
/// `source` starting at `start_round` never reaches `unreached`, even though
/// both are present throughout `[start_round, start_round + d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloodingCounterexample {
    pub source: NodeId,
    pub start_round: u32,
    pub unreached: NodeId,
}

impl std::fmt::Display for FloodingCounterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "token flooded from node {} at round {} does not reach node {} within d rounds",
            self.source, self.start_round, self.unreached
        )
    }
}

/// Checks the flooding guarantee over every start point of the schedule.
///
/// For each round `r` with `r + d <= horizon` and each node `u` present
/// throughout `[r, r + d]`, a token is flooded from `u` starting at round
/// `r`: every informed, surviving node rebroadcasts every round, and a
/// broadcast in round `q` informs the sender's round-`q` neighbors from round
/// `q + 1`. Every node present throughout the window must be informed by
/// round `r + d`. Start points whose source does not itself persist through
/// the window are exempt: a token cannot outlive an isolated source, and the
/// protocol only ever leans on floods whose source stays.
///
/// Returns the first violation in (round, source id, unreached id) order.
pub fn verify_comm_diameter(s: &Schedule) -> Result<(), FloodingCounterexample> {
    let d = s.d();
    if s.horizon() <= d {
        return Ok(());
    }
    let spans: Vec<(NodeId, (u32, u32))> = s.lifespans().collect();

    for r in 1..=s.horizon() - d {
        let end = r + d;
        // Window-local universe: nodes alive at some round of [r, end],
        // indexed in id order.
        let universe: Vec<NodeId> = spans
            .iter()
            .filter(|(_, (entry, last))| *entry <= end && *last >= r)
            .map(|(id, _)| *id)
            .collect();
        let local = |id: NodeId| universe.binary_search(&id).expect("node in window");
        let words = universe.len().div_ceil(64);

        // Membership masks per window round, plus adjacency rows for rounds
        // that have edges. Complete rounds need no rows: one broadcast from
        // any informed member saturates the whole vertex set.
        let mut alive = vec![vec![0u64; words]; (d + 1) as usize];
        let mut rows: Vec<Option<Vec<Vec<u64>>>> = Vec::with_capacity(d as usize);
        let mut complete = vec![false; d as usize];
        for (k, q) in (r..=end).enumerate() {
            let snap = s.snapshot_unchecked(q);
            for v in snap.vertices() {
                set_bit(&mut alive[k], local(*v));
            }
            if q == end {
                break;
            }
            let vcount = snap.vertices().len();
            if snap.edges().len() == vcount * vcount.saturating_sub(1) / 2 && vcount > 1 {
                complete[k] = true;
                rows.push(None);
            } else if snap.edges().is_empty() {
                rows.push(None);
            } else {
                let mut m = vec![vec![0u64; words]; universe.len()];
                for (a, b) in snap.edges() {
                    let (sa, sb) = (local(*a), local(*b));
                    set_bit(&mut m[sa], sb);
                    set_bit(&mut m[sb], sa);
                }
                rows.push(Some(m));
            }
        }

        // Sources and targets coincide: nodes present throughout the window.
        let mut targets = vec![0u64; words];
        for (slot, id) in universe.iter().enumerate() {
            if s.present_throughout(*id, r, end) {
                set_bit(&mut targets, slot);
            }
        }

        let mut informed = vec![0u64; words];
        for source_slot in ones(&targets).collect::<Vec<_>>() {
            informed.fill(0);
            set_bit(&mut informed, source_slot);
            for k in 0..d as usize {
                if complete[k] {
                    // informed is nonempty and within the current vertex
                    // set, so the complete round informs everyone alive.
                    informed.copy_from_slice(&alive[k]);
                } else if let Some(m) = &rows[k] {
                    // Only nodes informed before this round broadcast in it.
                    let reached: Vec<usize> = ones(&informed).collect();
                    for holder in reached {
                        or_into(&mut informed, &m[holder]);
                    }
                }
                and_into(&mut informed, &alive[k + 1]);
            }
            if let Some(missing) = first_uncovered(&targets, &informed) {
                return Err(FloodingCounterexample {
                    source: universe[source_slot],
                    start_round: r,
                    unreached: universe[missing],
                });
            }
        }
    }
    Ok(())
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn or_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= s;
    }
}

fn and_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

/// Lowest set bit of `targets & !covered`, if any.
fn first_uncovered(targets: &[u64], covered: &[u64]) -> Option<usize> {
    for (w, (t, c)) in targets.iter().zip(covered).enumerate() {
        let miss = t & !c;
        if miss != 0 {
            return Some(w * 64 + miss.trailing_zeros() as usize);
        }
    }
    None
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, word)| {
        let mut word = *word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let bit = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + bit)
        })
    })
}
