use crate::ratfunc::Var;

/// Bookkeeping for coinciding formal parameters between the two factors of a
/// product: pairs (i, j) with x_i = y_j, the merged parameter list (x's kept,
/// matched y's dropped), and the slot assignments induced on each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionMap {
    pub k: usize,
    pub n: usize,
    /// (i, j): x_i = y_j, 0-based
    pub pairs: Vec<(usize, usize)>,
    /// merged variable list, length k + n - r
    pub merged: Vec<Var>,
    /// explicit slot assignments (φ, ψ) overriding the positional default;
    /// used by mirrored products that consume the original slot order
    pub explicit: Option<(Vec<usize>, Vec<usize>)>,
}

impl ExclusionMap {
    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    pub fn merged_len(&self) -> usize {
        self.merged.len()
    }

    /// merged slot index feeding each φ-slot (the first k merged slots by
    /// default).
    pub fn phi_assignment(&self) -> Vec<usize> {
        if let Some((p, _)) = &self.explicit {
            return p.clone();
        }
        (0..self.k).collect()
    }

    /// merged slot index feeding each ψ-slot: matched slots reuse the paired
    /// x-position, unmatched ones follow in order after the x-block.
    pub fn psi_assignment(&self) -> Vec<usize> {
        if let Some((_, p)) = &self.explicit {
            return p.clone();
        }
        let mut out = Vec::with_capacity(self.n);
        let mut next_unmatched = self.k;
        for j in 0..self.n {
            if let Some((i, _)) = self.pairs.iter().find(|&&(_, jj)| jj == j) {
                out.push(*i);
            } else {
                out.push(next_unmatched);
                next_unmatched += 1;
            }
        }
        out
    }

    /// Trivial map for disjoint parameter sets.
    pub fn disjoint(k: usize, n: usize, merged: Vec<Var>) -> ExclusionMap {
        assert_eq!(merged.len(), k + n);
        ExclusionMap {
            k,
            n,
            pairs: vec![],
            merged,
            explicit: None,
        }
    }

    /// Shared-slot map: pairs (i, j) with the ψ-slot j reading the same
    /// merged slot as φ-slot i.
    pub fn with_pairs(k: usize, n: usize, pairs: Vec<(usize, usize)>, merged: Vec<Var>) -> ExclusionMap {
        assert_eq!(merged.len(), k + n - pairs.len());
        ExclusionMap {
            k,
            n,
            pairs,
            merged,
            explicit: None,
        }
    }
}

/// Merge two parameter lists per the right-hand exclusion convention: keep
/// all x's, drop each y that coincides with some x.
pub fn merge_params(xs: &[Var], ys: &[Var]) -> ExclusionMap {
    assert!(pairwise_distinct(xs), "x parameters must be distinct");
    assert!(pairwise_distinct(ys), "y parameters must be distinct");
    let mut pairs = Vec::new();
    let mut merged: Vec<Var> = xs.to_vec();
    for (j, y) in ys.iter().enumerate() {
        if let Some(i) = xs.iter().position(|x| x == y) {
            pairs.push((i, j));
        } else {
            merged.push(*y);
        }
    }
    ExclusionMap {
        k: xs.len(),
        n: ys.len(),
        pairs,
        merged,
        explicit: None,
    }
}

fn pairwise_distinct(vs: &[Var]) -> bool {
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if vs[i] == vs[j] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u32) -> Var {
        Var::z(i)
    }

    #[test]
    fn disjoint_sets() {
        let m = merge_params(&[z(1), z(2)], &[z(3), z(4)]);
        assert_eq!(m.r(), 0);
        assert_eq!(m.merged, vec![z(1), z(2), z(3), z(4)]);
        assert_eq!(m.psi_assignment(), vec![2, 3]);
    }

    #[test]
    fn one_coincidence() {
        // ({z1,z2}, {z2,z3}) -> r=1, merged (z1,z2,z3)
        let m = merge_params(&[z(1), z(2)], &[z(2), z(3)]);
        assert_eq!(m.r(), 1);
        assert_eq!(m.merged, vec![z(1), z(2), z(3)]);
        assert_eq!(m.pairs, vec![(1, 0)]);
        assert_eq!(m.phi_assignment(), vec![0, 1]);
        assert_eq!(m.psi_assignment(), vec![1, 2]);
    }

    #[test]
    fn full_coincidence() {
        let m = merge_params(&[z(1)], &[z(1)]);
        assert_eq!(m.r(), 1);
        assert_eq!(m.merged, vec![z(1)]);
        assert_eq!(m.psi_assignment(), vec![0]);
    }
}
