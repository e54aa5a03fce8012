//! Canonical labelling of finite posets.
//!
//! Individualisation-refinement: cells of an ordered partition are split by
//! the multiset of cover-neighbour cells until stable; the first non-trivial
//! cell is then branched on. Among all discrete leaves the lexicographically
//! least order matrix is the certificate.

use sha2::{Digest, Sha256};

/// Byte string that is equal for two posets exactly when they are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub digest: Vec<u8>,
}

impl CanonicalForm {
    /// Short hexadecimal fingerprint, used for file names.
    pub fn hex(&self) -> String {
        let h = Sha256::digest(&self.digest);
        hex::encode(&h[..10])
    }
}

type Cells = Vec<Vec<usize>>;

pub fn canonical_form(
    n: usize,
    lower: &[Vec<usize>],
    upper: &[Vec<usize>],
    leq: impl Fn(usize, usize) -> bool,
) -> CanonicalForm {
    canonical_labeling(n, lower, upper, leq).0
}

/// Returns the certificate and the vertex order producing it.
pub fn canonical_labeling(
    n: usize,
    lower: &[Vec<usize>],
    upper: &[Vec<usize>],
    leq: impl Fn(usize, usize) -> bool,
) -> (CanonicalForm, Vec<usize>) {
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    if n > 0 {
        search(vec![(0..n).collect()], lower, upper, &leq, &mut best);
    }
    let (digest, order) = best.unwrap_or_default();
    let mut bytes = (n as u32).to_le_bytes().to_vec();
    bytes.extend(digest);
    (CanonicalForm { digest: bytes }, order)
}

fn search(
    mut cells: Cells,
    lower: &[Vec<usize>],
    upper: &[Vec<usize>],
    leq: &impl Fn(usize, usize) -> bool,
    best: &mut Option<(Vec<u8>, Vec<usize>)>,
) {
    refine(&mut cells, lower, upper);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let cert = certificate(&order, leq);
            if best.as_ref().is_none_or(|(b, _)| cert < *b) {
                *best = Some((cert, order));
            }
        }
        Some(ci) => {
            for &v in &cells[ci] {
                let mut next = Vec::with_capacity(cells.len() + 1);
                next.extend_from_slice(&cells[..ci]);
                next.push(vec![v]);
                next.push(cells[ci].iter().copied().filter(|&w| w != v).collect());
                next.extend_from_slice(&cells[ci + 1..]);
                search(next, lower, upper, leq, best);
            }
        }
    }
}

fn refine(cells: &mut Cells, lower: &[Vec<usize>], upper: &[Vec<usize>]) {
    let n = lower.len();
    let mut cell_of = vec![0usize; n];
    loop {
        for (ci, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = ci;
            }
        }
        let mut changed = false;
        let mut next: Cells = Vec::with_capacity(cells.len());
        for c in cells.iter() {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut tagged: Vec<(Vec<usize>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut sig: Vec<usize> = lower[v]
                        .iter()
                        .map(|&w| 2 * cell_of[w])
                        .chain(upper[v].iter().map(|&w| 2 * cell_of[w] + 1))
                        .collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            tagged.sort();
            let before = next.len();
            let mut start = 0;
            for k in 1..=tagged.len() {
                if k == tagged.len() || tagged[k].0 != tagged[start].0 {
                    next.push(tagged[start..k].iter().map(|t| t.1).collect());
                    start = k;
                }
            }
            if next.len() - before > 1 {
                changed = true;
            }
        }
        *cells = next;
        if !changed {
            break;
        }
    }
}

fn certificate(order: &[usize], leq: &impl Fn(usize, usize) -> bool) -> Vec<u8> {
    let n = order.len();
    let mut out = vec![0u8; (n * n).div_ceil(8)];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            // Set bits mean "not below" so that smaller certificates put
            // comparabilities first.
            if !leq(a, b) {
                let k = i * n + j;
                out[k / 8] |= 0x80 >> (k % 8);
            }
        }
    }
    out
}

/// Plain backtracking isomorphism test on order relations.
pub fn brute_isomorphic(
    n: usize,
    leq_a: impl Fn(usize, usize) -> bool,
    m: usize,
    leq_b: impl Fn(usize, usize) -> bool,
) -> bool {
    if n != m {
        return false;
    }
    let deg = |leq: &dyn Fn(usize, usize) -> bool, x: usize| {
        let below = (0..n).filter(|&y| leq(y, x)).count();
        let above = (0..n).filter(|&y| leq(x, y)).count();
        (below, above)
    };
    let da: Vec<_> = (0..n).map(|x| deg(&leq_a, x)).collect();
    let db: Vec<_> = (0..n).map(|x| deg(&leq_b, x)).collect();
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        n: usize,
        map: &mut [usize],
        used: &mut [bool],
        da: &[(usize, usize)],
        db: &[(usize, usize)],
        leq_a: &dyn Fn(usize, usize) -> bool,
        leq_b: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || da[k] != db[cand] {
                continue;
            }
            let ok = (0..k).all(|p| leq_a(p, k) == leq_b(map[p], cand) && leq_a(k, p) == leq_b(cand, map[p]));
            if !ok {
                continue;
            }
            map[k] = cand;
            used[cand] = true;
            if go(k + 1, n, map, used, da, db, leq_a, leq_b) {
                return true;
            }
            used[cand] = false;
        }
        false
    }
    go(0, n, &mut map, &mut used, &da, &db, &leq_a, &leq_b)
}

#[cfg(test)]
mod tests {
    use crate::lattice::standard::*;

    #[test]
    fn relabelled_n5_has_same_form() {
        let a = n5();
        let b = a.permuted(&[4, 2, 0, 3, 1]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_ne!(a.canonical_form(), m3().canonical_form());
    }

    #[test]
    fn antichain_lattices_terminate() {
        // M_6 style lattice: 6 atoms, heavy symmetry.
        let mut ids = vec!["0".to_string(), "1".to_string()];
        let mut covers = Vec::new();
        for k in 0..6 {
            ids.push(format!("a{k}"));
            covers.push((0, k + 2));
            covers.push((k + 2, 1));
        }
        let l = crate::FiniteLattice::from_covers(ids, &covers).unwrap();
        let p = l.permuted(&[7, 6, 5, 4, 3, 2, 1, 0]);
        assert_eq!(l.canonical_form(), p.canonical_form());
        assert!(l.is_isomorphic(&p));
    }
}
