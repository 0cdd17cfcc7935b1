//! Brute-force refutation over small rooted frames, used to cross-check the
//! decision procedure.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::LogicId;
use crate::kripke::{full_mask, OrderMode, PreorderModel, SmallModel, WorldSet};
use crate::syntax::Formula;
use crate::{par, Error};

/// Largest frame size the enumeration supports.
pub const MAX_ENUMERATED_WORLDS: usize = 6;

static FRAMES: [OnceLock<Vec<Vec<u64>>>; MAX_ENUMERATED_WORLDS + 1] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// One representative per isomorphism class of preorders on `n` points
/// rooted at point 0, as successor masks, sorted by canonical code.
pub fn rooted_preorders(n: usize) -> Result<&'static [Vec<u64>], Error> {
    if n == 0 || n > MAX_ENUMERATED_WORLDS {
        return Err(Error::ResourceExceeded(format!(
            "frame enumeration supports 1..={MAX_ENUMERATED_WORLDS} worlds, asked for {n}"
        )));
    }
    Ok(FRAMES[n].get_or_init(|| enumerate(n)))
}

fn enumerate(n: usize) -> Vec<Vec<u64>> {
    let all = full_mask(n);
    // free pairs (i, j) with i >= 1 and i != j; row 0 is full
    let free: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut seen: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for bits in 0u64..(1 << free.len()) {
        let mut rows: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        rows[0] = all;
        for (k, &(i, j)) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| rows[i] >> j & 1 == 0 || rows[j] & !rows[i] == 0));
        if transitive {
            seen.entry(canonical_code(&rows)).or_insert(rows);
        }
    }
    seen.into_values().collect()
}

/// Smallest row-major encoding over all relabelings that respect a
/// degree-based invariant ordering.
fn canonical_code(rows: &[u64]) -> u64 {
    let n = rows.len();
    let pred = |j: usize| rows.iter().filter(|&&r| r >> j & 1 == 1).count();
    let inv: Vec<(u32, usize)> = (0..n).map(|i| (rows[i].count_ones(), pred(i))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(inv[i]));
    // groups of points with equal invariants, permuted among themselves
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if inv[g[0]] == inv[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut best = u64::MAX;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        groups: &mut [Vec<usize>],
        g: usize,
        perm: &mut Vec<usize>,
        rows: &[u64],
        best: &mut u64,
    ) {
        if g == groups.len() {
            // perm[new] = old
            let n = rows.len();
            let mut code = 0u64;
            for a in 0..n {
                for b in 0..n {
                    code = code << 1 | (rows[perm[a]] >> perm[b] & 1);
                }
            }
            *best = (*best).min(code);
            return;
        }
        let k = groups[g].len();
        let mut items = groups[g].clone();
        permute(&mut items, k, &mut |p| {
            perm.extend_from_slice(p);
            rec(groups, g + 1, perm, rows, best);
            perm.truncate(perm.len() - p.len());
        });
    }
    fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            f(items);
            return;
        }
        for i in 0..k {
            permute(items, k - 1, f);
            let j = if k % 2 == 0 { i } else { 0 };
            items.swap(j, k - 1);
        }
    }
    rec(&mut groups, 0, &mut perm, rows, &mut best);
    best
}

fn frame_model(rows: &[u64]) -> PreorderModel {
    let n = rows.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| {
            (0..n)
                .filter(move |&j| rows[i] >> j & 1 == 1)
                .map(move |j| (i, j))
        })
        .collect();
    PreorderModel::from_indices(n, &pairs, BTreeMap::new(), OrderMode::Strict)
        .expect("enumerated preorder")
}

/// First model (by size, then frame, then valuation) in the logic's frame
/// class with at most `max_worlds` worlds whose root refutes `f`.
pub fn countermodel_search(
    f: &Formula,
    logic: LogicId,
    max_worlds: usize,
) -> Result<Option<(PreorderModel, usize)>, Error> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let a = atoms.len();
    for n in 1..=max_worlds {
        let frames: Vec<&Vec<u64>> = rooted_preorders(n)?
            .iter()
            .filter(|rows| logic.admits_frame(&frame_model(rows)))
            .collect();
        let bits = n * a;
        if bits >= 40 {
            return Err(Error::ResourceExceeded(format!(
                "{a} atoms over {n} worlds is too many valuations"
            )));
        }
        let per_frame = 1u64 << bits;
        let total = frames.len() as u64 * per_frame;
        let found = par::find_map_first_range(total, |code| {
            let rows = frames[(code / per_frame) as usize];
            let val = code % per_frame;
            let extents: Vec<(String, u64)> = atoms
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), val >> (i * n) & full_mask(n)))
                .collect();
            let m = SmallModel::from_masks(rows.clone(), extents.clone());
            (m.check(f) & 1 == 0).then_some((rows, extents))
        });
        if let Some((rows, extents)) = found {
            let mut model = frame_model(rows);
            for (name, mask) in extents {
                model.set_atom(&name, WorldSet::from_mask(n, mask));
            }
            return Ok(Some((model, 0)));
        }
    }
    Ok(None)
}
