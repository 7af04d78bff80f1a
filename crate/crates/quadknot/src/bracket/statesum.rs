//! State sums over local expansions of crossings.
//!
//! Each crossing contributes a list of (pairing of its ends, coefficient).
//! `contract` sweeps crossings in a frontier-minimising order and keeps, for
//! every pairing of the still-open ends, the accumulated polynomial. Closed
//! loops are absorbed as loop factors on the fly. `brute_force` enumerates
//! every state and counts loops with a union-find; it is the oracle.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::diagram::Diagram;
use crate::laurent::LaurentPoly;

/// One local option: `pairing[k]` is the end joined to end `k`.
pub type LocalOption = (Vec<u8>, LaurentPoly);

const PARALLEL_THRESHOLD: usize = 512;

/// Sum over all states of the product of coefficients times `d^(loops - 1)`,
/// where `d = -A^2 - A^-2`.
pub fn contract(d: &Diagram, local: &[Vec<LocalOption>]) -> LaurentPoly {
    let n = d.num_crossings();
    if n == 0 {
        return LaurentPoly::one();
    }
    let order = sweep_order(d);
    let loop_pows = loop_powers(d.num_slots() / 2 + 1);

    let mut added = vec![false; n];
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<u16>, LaurentPoly> = HashMap::from([(Vec::new(), LaurentPoly::one())]);

    for &x in &order {
        let off = d.global_offset(x);
        let len = d.crossing(x).ends().len();
        let m = frontier.len();
        let pos_in_frontier: HashMap<usize, usize> = frontier.iter().enumerate().map(|(i, &g)| (g, i)).collect();

        // Node ids: 0..m frontier, m..m+len ends of x.
        let mut link = vec![usize::MAX; m + len];
        for k in 0..len {
            let p = d.partner_global(off + k);
            let px = d.slot(p).crossing;
            if px == x {
                link[m + k] = m + (p - off);
            } else if let Some(&i) = pos_in_frontier.get(&p) {
                link[m + k] = i;
                link[i] = m + k;
            }
        }
        let mut next_frontier: Vec<usize> = (0..m).filter(|&i| link[i] == usize::MAX).map(|i| frontier[i]).collect();
        for k in 0..len {
            let p = d.partner_global(off + k);
            if link[m + k] == usize::MAX && !added[d.slot(p).crossing] {
                next_frontier.push(off + k);
            }
        }
        next_frontier.sort_unstable();
        let new_index: HashMap<usize, usize> = next_frontier.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let node_new: Vec<usize> = (0..m + len)
            .map(|v| {
                let g = if v < m { frontier[v] } else { off + (v - m) };
                new_index.get(&g).copied().unwrap_or(usize::MAX)
            })
            .collect();
        let opts = &local[x];

        let step = |key: &Vec<u16>, poly: &LaurentPoly, out: &mut HashMap<Vec<u16>, LaurentPoly>| {
            for (pairing, coeff) in opts {
                let (new_key, loops) = merge(key, pairing, &link, &node_new, m, next_frontier.len());
                let term = &(poly * coeff) * &loop_pows[loops];
                match out.get_mut(&new_key) {
                    Some(acc) => *acc += &term,
                    None => {
                        out.insert(new_key, term);
                    }
                }
            }
        };

        states = if states.len() >= PARALLEL_THRESHOLD {
            let entries: Vec<(&Vec<u16>, &LaurentPoly)> = states.iter().collect();
            entries
                .par_chunks(64)
                .map(|chunk| {
                    let mut out = HashMap::new();
                    for (key, poly) in chunk {
                        step(key, poly, &mut out);
                    }
                    out
                })
                .reduce(HashMap::new, merge_maps)
        } else {
            let mut out = HashMap::new();
            for (key, poly) in &states {
                step(key, poly, &mut out);
            }
            out
        };
        states.retain(|_, p| !p.is_zero());
        added[x] = true;
        frontier = next_frontier;
    }
    let total = states.remove(&Vec::new()).unwrap_or_default();
    total.div_exact(&LaurentPoly::loop_factor()).expect("every state closes at least one loop")
}

fn merge_maps(mut a: HashMap<Vec<u16>, LaurentPoly>, b: HashMap<Vec<u16>, LaurentPoly>) -> HashMap<Vec<u16>, LaurentPoly> {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (k, v) in b {
        match a.get_mut(&k) {
            Some(acc) => *acc += &v,
            None => {
                a.insert(k, v);
            }
        }
    }
    a
}

/// Joins the frontier pairing `key` with a local pairing through the edge
/// links; returns the new frontier pairing and the number of closed loops.
fn merge(
    key: &[u16],
    pairing: &[u8],
    link: &[usize],
    node_new: &[usize],
    m: usize,
    new_len: usize,
) -> (Vec<u16>, usize) {
    let total = link.len();
    // First arc of each node: frontier pairing or local pairing.
    let first = |v: usize| if v < m { key[v] as usize } else { m + pairing[v - m] as usize };
    let mut seen = vec![false; total];
    let mut out = vec![0u16; new_len];
    for start in 0..total {
        if seen[start] || link[start] != usize::MAX || node_new[start] == usize::MAX {
            continue;
        }
        // Walk: first arc, then link, alternating, until a node without link.
        let mut v = start;
        seen[v] = true;
        loop {
            let w = first(v);
            seen[w] = true;
            if link[w] == usize::MAX {
                out[node_new[start]] = node_new[w] as u16;
                out[node_new[w]] = node_new[start] as u16;
                break;
            }
            v = link[w];
            seen[v] = true;
        }
    }
    let mut loops = 0;
    for start in 0..total {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            let w = first(v);
            seen[w] = true;
            v = link[w];
        }
    }
    (out, loops)
}

/// Greedy order: next crossing is the one with most ends joined to the
/// already swept part; ties go to the lowest index.
fn sweep_order(d: &Diagram) -> Vec<usize> {
    let n = d.num_crossings();
    let mut added = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut score = vec![0usize; n];
    for _ in 0..n {
        let x = (0..n)
            .filter(|&x| !added[x])
            .max_by(|&a, &b| score[a].cmp(&score[b]).then(b.cmp(&a)))
            .expect("crossings remain");
        added[x] = true;
        order.push(x);
        let off = d.global_offset(x);
        for k in 0..d.crossing(x).ends().len() {
            let y = d.slot(d.partner_global(off + k)).crossing;
            score[y] += 1;
        }
    }
    order
}

/// Exhaustive enumeration of every state.
pub fn brute_force(d: &Diagram, local: &[Vec<LocalOption>]) -> LaurentPoly {
    let n = d.num_crossings();
    if n == 0 {
        return LaurentPoly::one();
    }
    let sizes: Vec<usize> = local.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let loop_pows = loop_powers(d.num_slots() / 2 + 1);
    (0..total)
        .into_par_iter()
        .fold(LaurentPoly::zero, |mut acc, mut idx| {
            let mut coeff = LaurentPoly::one();
            let mut parent: Vec<usize> = (0..d.num_slots()).collect();
            for x in 0..n {
                let (pairing, c) = &local[x][idx % sizes[x]];
                idx /= sizes[x];
                coeff = &coeff * c;
                let off = d.global_offset(x);
                for (k, &p) in pairing.iter().enumerate() {
                    union(&mut parent, off + k, off + p as usize);
                }
            }
            for g in 0..d.num_slots() {
                union(&mut parent, g, d.partner_global(g));
            }
            let loops = (0..d.num_slots()).filter(|&g| find(&mut parent, g) == g).count();
            acc += &(&coeff * &loop_pows[loops - 1]);
            acc
        })
        .reduce(LaurentPoly::zero, |a, b| a + b)
}

/// `d^0 ..= d^max`.
pub(crate) fn loop_powers(max: usize) -> Vec<LaurentPoly> {
    let d = LaurentPoly::loop_factor();
    let mut out = vec![LaurentPoly::one()];
    for k in 1..=max {
        let next = &out[k - 1] * &d;
        out.push(next);
    }
    out
}

pub(crate) fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

pub(crate) fn union(p: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra != rb {
        p[ra] = rb;
    }
}

/// Number of loops of a full state given by one pairing per crossing.
pub fn count_loops(d: &Diagram, pairings: &[&[u8]]) -> usize {
    loop_ids(d, pairings).1
}

/// Loop id of every global slot, and the number of loops.
pub fn loop_ids(d: &Diagram, pairings: &[&[u8]]) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..d.num_slots()).collect();
    for (x, pairing) in pairings.iter().enumerate() {
        let off = d.global_offset(x);
        for (k, &p) in pairing.iter().enumerate() {
            union(&mut parent, off + k, off + p as usize);
        }
    }
    for g in 0..d.num_slots() {
        union(&mut parent, g, d.partner_global(g));
    }
    let mut ids = vec![usize::MAX; d.num_slots()];
    let mut root_id = HashMap::new();
    for (g, id) in ids.iter_mut().enumerate() {
        let r = find(&mut parent, g);
        let next = root_id.len();
        *id = *root_id.entry(r).or_insert(next);
    }
    (ids, root_id.len())
}
