use std::collections::{BTreeMap, HashMap};

use super::{add_into, blockvec_add, blockvec_eq, BlockVec, Cell, CochainComplex, Miss};
use crate::linalg::Matrix;
use crate::scalars::Scalar;
use crate::EngineError;

/// A linear map between the cochain spaces of two complexes, shifting
/// degree by `offset`. For chain maps `sign` records whether the map
/// commutes (`1`) or anti-commutes (`-1`) with the differentials.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub name: String,
    pub offset: isize,
    pub sign: i64,
    images: BTreeMap<usize, BTreeMap<(usize, usize), BlockVec>>,
}

impl GradedMap {
    /// The map induced by a map on cells. Fails if some image leaves the
    /// target's window or constrained subspace.
    pub fn from_cells(
        name: &str,
        src: &CochainComplex,
        tgt: &CochainComplex,
        offset: isize,
        sign: i64,
        f: impl Fn(&Cell) -> Vec<(Cell, Scalar)>,
    ) -> Result<Self, EngineError> {
        let mut images = BTreeMap::new();
        for r in 0..=src.top() + 1 {
            let rt = r as isize + offset;
            if rt < 0 || rt as usize > tgt.top() + 1 {
                continue;
            }
            let mut per = BTreeMap::new();
            for (k, block) in src.blocks().iter().enumerate() {
                let Some(space) = block.space(r) else { continue };
                let cell_images: Vec<Vec<(Cell, Scalar)>> = space.cells().iter().map(&f).collect();
                for j in 0..space.dim() {
                    let mut acc: HashMap<Cell, Scalar> = HashMap::new();
                    for (i, x) in space.vector(j).iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (c, y) in &cell_images[i] {
                            add_into(&mut acc, c.clone(), x * y);
                        }
                    }
                    let image = tgt.embed(rt as usize, acc).map_err(|m| match m {
                        Miss::Outside(c) => EngineError::guard(format!("{name} leaves the target window at {}", tgt.describe(&c))),
                        Miss::NotInSubspace(_) => EngineError::guard(format!("{name} leaves {} in degree {rt}", tgt.kind())),
                    })?;
                    if !image.is_empty() {
                        per.insert((k, j), image);
                    }
                }
            }
            images.insert(r, per);
        }
        Ok(GradedMap {
            name: name.to_string(),
            offset,
            sign,
            images,
        })
    }

    pub fn target_degree(&self, r: usize) -> Option<usize> {
        let t = r as isize + self.offset;
        (t >= 0).then_some(t as usize)
    }

    pub fn apply(&self, r: usize, v: &BlockVec) -> BlockVec {
        let mut out = BlockVec::new();
        let Some(per) = self.images.get(&r) else { return out };
        for (&k, x) in v {
            for (j, s) in x.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                if let Some(img) = per.get(&(k, j)) {
                    out = blockvec_add(&out, img, s);
                }
            }
        }
        out
    }

    /// Images of the basis of the source in degree `r`.
    pub fn images(&self, src: &CochainComplex, r: usize) -> Vec<BlockVec> {
        let mut out = Vec::new();
        for (k, block) in src.blocks().iter().enumerate() {
            for j in 0..block.dim(r) {
                out.push(self.images.get(&r).and_then(|m| m.get(&(k, j))).cloned().unwrap_or_default());
            }
        }
        out
    }

    pub fn rank(&self, src: &CochainComplex, r: usize) -> usize {
        rank_of_blockvecs(&self.images(src, r))
    }

    /// Checks `F∘d = sign · d∘F` on every basis vector.
    pub fn check_commutes(&self, src: &CochainComplex, tgt: &CochainComplex) -> Result<(), EngineError> {
        for r in 0..=src.top() {
            let Some(rt) = self.target_degree(r) else { continue };
            for (k, block) in src.blocks().iter().enumerate() {
                for j in 0..block.dim(r) {
                    let e = src.unit(r, k, j);
                    let lhs = self.apply(r + 1, &src.d_vec(r, &e));
                    let rhs = tgt.d_vec(rt, &self.apply(r, &e));
                    let rhs = blockvec_add(&BlockVec::new(), &rhs, &Scalar::from_int(self.sign));
                    if !blockvec_eq(&lhs, &rhs) {
                        return Err(EngineError::guard(format!(
                            "{} does not {} with d in degree {r}",
                            self.name,
                            if self.sign == 1 { "commute" } else { "anti-commute" }
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rank of a family of block vectors. Vectors are grouped into connected
/// components of shared classes and each component is eliminated densely.
pub fn rank_of_blockvecs(vecs: &[BlockVec]) -> usize {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = parent[&x];
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
    let supports: Vec<Vec<usize>> = vecs
        .iter()
        .map(|v| {
            v.iter()
                .filter(|(_, x)| x.iter().any(|s| !s.is_zero()))
                .map(|(k, x)| {
                    dims.insert(*k, x.len());
                    *k
                })
                .collect()
        })
        .collect();
    for &k in dims.keys() {
        parent.insert(k, k);
    }
    for s in &supports {
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent.insert(a, b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in supports.iter().enumerate() {
        if let Some(&k) = s.first() {
            let root = find(&mut parent, k);
            groups.entry(root).or_default().push(i);
        }
    }
    let mut rank = 0;
    for members in groups.values() {
        let mut classes: Vec<usize> = members.iter().flat_map(|&i| supports[i].iter().copied()).collect();
        classes.sort_unstable();
        classes.dedup();
        let mut offsets = BTreeMap::new();
        let mut len = 0;
        for k in &classes {
            offsets.insert(*k, len);
            len += dims[k];
        }
        let columns: Vec<Vec<Scalar>> = members
            .iter()
            .map(|&i| {
                let mut col = vec![Scalar::zero(); len];
                for (k, x) in &vecs[i] {
                    if let Some(&o) = offsets.get(k) {
                        for (t, s) in x.iter().enumerate() {
                            col[o + t] = s.clone();
                        }
                    }
                }
                col
            })
            .collect();
        rank += Matrix::from_columns(len, &columns).rank();
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_splits_components() {
        let s = Scalar::from_int;
        let vecs = vec![
            BlockVec::from([(0, vec![s(1), s(0)])]),
            BlockVec::from([(0, vec![s(2), s(0)])]),
            BlockVec::from([(0, vec![s(0), s(1)]), (3, vec![s(1)])]),
            BlockVec::from([(3, vec![s(5)])]),
            BlockVec::new(),
        ];
        assert_eq!(rank_of_blockvecs(&vecs), 3);
    }
}
