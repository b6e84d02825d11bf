//! Graded posets of faces, encoded by the atoms below each element, with a
//! canonical form up to isomorphism.

use crate::lattice::FaceLattice;

/// Canonical encoding of a graded atomic poset: sorted `(rank, atom mask)`
/// pairs after canonical relabeling of the atoms.
pub type PosetKey = Vec<(i32, u64)>;

/// A finite graded poset whose order is inclusion of atom sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoset {
    dims: Vec<i32>,
    masks: Vec<u64>,
    natoms: usize,
}

impl GradedPoset {
    /// Poset of a face lattice. Atoms are the covers of the minimum if there
    /// is one, otherwise the minimal faces.
    pub fn from_face_lattice(l: &FaceLattice) -> Self {
        let n = l.len();
        let dims: Vec<i32> = l.faces().iter().map(|f| f.dim as i32).collect();
        if n == 1 {
            return GradedPoset { dims, masks: vec![0], natoms: 0 };
        }
        let atoms: Vec<usize> = match (0..n).find(|&i| (0..n).all(|j| l.leq(i, j))) {
            Some(b) => l.face(b).parents.clone(),
            None => (0..n).filter(|&i| (0..n).all(|j| j == i || !l.leq(j, i))).collect(),
        };
        assert!(atoms.len() <= 64, "too many atoms");
        let masks = (0..n)
            .map(|i| atoms.iter().enumerate().filter(|(_, &a)| l.leq(a, i)).fold(0u64, |m, (k, _)| m | 1 << k))
            .collect();
        GradedPoset { dims, masks, natoms: atoms.len() }
    }

    /// Builds a poset from explicit ranks and atom masks.
    pub fn from_parts(dims: Vec<i32>, masks: Vec<u64>, natoms: usize) -> Self {
        assert_eq!(dims.len(), masks.len());
        GradedPoset { dims, masks, natoms }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, i: usize) -> i32 {
        self.dims[i]
    }

    pub fn natoms(&self) -> usize {
        self.natoms
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.masks[i] & !self.masks[j] == 0 && self.dims[i] <= self.dims[j]
    }

    /// The unique maximal element.
    pub fn top(&self) -> usize {
        (0..self.len()).max_by_key(|&i| (self.dims[i], self.masks[i].count_ones())).expect("nonempty poset")
    }

    /// The element with no atoms below it, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.masks[i] == 0)
    }

    /// Rank of the top element.
    pub fn rank(&self) -> i32 {
        self.dims[self.top()]
    }

    /// Upper interval `[i, top]`, ranks shifted so that `i` has rank 0.
    pub fn interval_above(&self, i: usize) -> GradedPoset {
        let elems: Vec<usize> = (0..self.len()).filter(|&j| self.leq(i, j)).collect();
        let base = self.dims[i];
        let atoms: Vec<usize> = elems.iter().copied().filter(|&j| self.dims[j] == base + 1).collect();
        let masks = elems
            .iter()
            .map(|&j| atoms.iter().enumerate().filter(|(_, &a)| self.leq(a, j)).fold(0u64, |m, (k, _)| m | 1 << k))
            .collect();
        GradedPoset { dims: elems.iter().map(|&j| self.dims[j] - base).collect(), masks, natoms: atoms.len() }
    }

    /// Drops the bottom element and lowers every rank by one.
    pub fn without_bottom(&self) -> GradedPoset {
        let b = self.bottom().expect("poset has a bottom element");
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != b).collect();
        GradedPoset {
            dims: keep.iter().map(|&j| self.dims[j] - 1).collect(),
            masks: keep.iter().map(|&j| self.masks[j]).collect(),
            natoms: self.natoms,
        }
    }

    fn encode(&self, label: &[usize]) -> PosetKey {
        let mut key: PosetKey = self
            .dims
            .iter()
            .zip(&self.masks)
            .map(|(d, m)| {
                let relabeled = (0..self.natoms).filter(|a| m >> a & 1 == 1).fold(0u64, |acc, a| acc | 1 << label[a]);
                (*d, relabeled)
            })
            .collect();
        key.sort_unstable();
        key
    }

    fn refine(&self, colors: &mut Vec<usize>) {
        loop {
            let sigs: Vec<(usize, Vec<(i32, u32, Vec<usize>)>)> = (0..self.natoms)
                .map(|a| {
                    let mut around: Vec<(i32, u32, Vec<usize>)> = (0..self.len())
                        .filter(|&e| self.masks[e] >> a & 1 == 1)
                        .map(|e| {
                            let mut cs: Vec<usize> =
                                (0..self.natoms).filter(|b| self.masks[e] >> b & 1 == 1).map(|b| colors[b]).collect();
                            cs.sort_unstable();
                            (self.dims[e], self.masks[e].count_ones(), cs)
                        })
                        .collect();
                    around.sort_unstable();
                    (colors[a], around)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
            let before = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
            *colors = next;
            if distinct.len() == before {
                return;
            }
        }
    }

    fn search(&self, mut colors: Vec<usize>, best: &mut Option<PosetKey>) {
        self.refine(&mut colors);
        let ncolors = colors.iter().max().map_or(0, |m| m + 1);
        if ncolors == self.natoms {
            let key = self.encode(&colors);
            if best.as_ref().map_or(true, |b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        // first non-singleton cell
        let cell = (0..ncolors).find(|c| colors.iter().filter(|x| *x == c).count() > 1).expect("not discrete");
        for x in (0..self.natoms).filter(|&a| colors[a] == cell) {
            let mut split: Vec<usize> =
                colors.iter().enumerate().map(|(a, &c)| 2 * c + usize::from(c == cell && a != x)).collect();
            let mut distinct = split.clone();
            distinct.sort_unstable();
            distinct.dedup();
            for c in split.iter_mut() {
                *c = distinct.binary_search(c).expect("present");
            }
            self.search(split, best);
        }
    }

    /// Canonical form: equal for isomorphic posets, distinct otherwise.
    pub fn canonical_key(&self) -> PosetKey {
        if self.natoms == 0 {
            let mut k: PosetKey = self.dims.iter().map(|d| (*d, 0)).collect();
            k.sort_unstable();
            return k;
        }
        let mut best = None;
        self.search(vec![0; self.natoms], &mut best);
        best.expect("search reaches a leaf")
    }
}
