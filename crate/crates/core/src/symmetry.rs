//! Symmetries of a truth table and the orbit partition of the cube they
//! induce.
//!
//! The degree LPs are invariant under any map `x ↦ σ(x) ⊕ a` that fixes `f`
//! (such maps preserve polynomial degree), so an optimal solution can be
//! averaged over the group. That lets every LP run over orbits instead of
//! points. Callers re-verify results on the full cube, so a missed symmetry
//! only costs time.

use std::collections::HashSet;

use crate::boolfn::BooleanFunction;

/// `x ↦ y` with `y_{perm[i]} = x_i ⊕ flip_i` (0-based bits).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub flip: u64,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            flip: 0,
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut s = Self::identity(n);
        s.perm.swap(i, j);
        s
    }

    pub fn flips(n: usize, mask: u64) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            flip: mask,
        }
    }

    /// Exchange the aligned blocks `[a·b, (a+1)·b)` and `[c·b, (c+1)·b)`.
    pub fn block_swap(n: usize, b: usize, a: usize, c: usize) -> Self {
        let mut s = Self::identity(n);
        for k in 0..b {
            s.perm.swap(a * b + k, c * b + k);
        }
        s
    }

    pub fn apply(&self, x: usize) -> usize {
        let x = x ^ self.flip as usize;
        let mut y = 0usize;
        for (i, &p) in self.perm.iter().enumerate() {
            y |= ((x >> i) & 1) << p;
        }
        y
    }

    pub fn fixes(&self, f: &BooleanFunction) -> bool {
        (0..f.len()).all(|x| f.value(x) == f.value(self.apply(x)))
    }
}

/// Symmetries of `f` among transpositions, pair flips, and swaps of aligned
/// equal-size blocks. These generate the groups that arise from composed and
/// recursive functions with contiguous block layout.
pub fn detect(f: &BooleanFunction) -> Vec<SignedPerm> {
    let n = f.arity();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let t = SignedPerm::transposition(n, i, j);
            if t.fixes(f) {
                gens.push(t);
            }
            let fl = SignedPerm::flips(n, (1 << i) | (1 << j));
            if fl.fixes(f) {
                gens.push(fl);
            }
        }
    }
    for b in 2..=n / 2 {
        if n % b != 0 {
            continue;
        }
        let blocks = n / b;
        for a in 0..blocks {
            for c in a + 1..blocks {
                let s = SignedPerm::block_swap(n, b, a, c);
                if s.fixes(f) {
                    gens.push(s);
                }
            }
        }
    }
    gens
}

/// Partition of `{0,1}^n` into orbits, numbered by smallest member.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub arity: usize,
    pub orbit_of: Vec<u32>,
    pub sizes: Vec<u64>,
    pub representatives: Vec<usize>,
}

impl Orbits {
    pub fn trivial(n: usize) -> Self {
        let len = 1usize << n;
        Orbits {
            arity: n,
            orbit_of: (0..len as u32).collect(),
            sizes: vec![1; len],
            representatives: (0..len).collect(),
        }
    }

    pub fn from_generators(n: usize, gens: &[SignedPerm]) -> Self {
        let len = 1usize << n;
        let mut parent: Vec<u32> = (0..len as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for g in gens {
            for x in 0..len {
                let a = find(&mut parent, x as u32);
                let b = find(&mut parent, g.apply(x) as u32);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
        let mut id_of_root = vec![u32::MAX; len];
        let mut orbit_of = vec![0u32; len];
        let mut sizes = Vec::new();
        let mut representatives = Vec::new();
        for x in 0..len {
            let r = find(&mut parent, x as u32) as usize;
            if id_of_root[r] == u32::MAX {
                id_of_root[r] = sizes.len() as u32;
                sizes.push(0);
                representatives.push(x);
            }
            let id = id_of_root[r];
            orbit_of[x] = id;
            sizes[id as usize] += 1;
        }
        Orbits {
            arity: n,
            orbit_of,
            sizes,
            representatives,
        }
    }

    pub fn of(f: &BooleanFunction) -> Self {
        Self::from_generators(f.arity(), &detect(f))
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// `row[O] = #{x ∈ O : x ⊇ mask}`, the orbit sums of the monomial `x^mask`.
    pub fn moment_row(&self, mask: usize) -> Vec<u64> {
        let mut row = vec![0u64; self.count()];
        let free = !mask & ((1usize << self.arity) - 1);
        let mut sub = free;
        loop {
            row[self.orbit_of[sub | mask] as usize] += 1;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        row
    }

    /// Linearly independent moment rows for monomials of degree ≤ `max_degree`,
    /// with the monomial mask each row came from. Independence is decided
    /// modulo a large prime; results built on these rows are re-verified
    /// on the full cube.
    pub fn independent_moments(&self, max_degree: usize) -> Vec<(usize, Vec<u64>)> {
        let n = self.arity;
        let mut masks: Vec<usize> = (0..1usize << n)
            .filter(|m| (m.count_ones() as usize) <= max_degree)
            .collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut echelon = ModEchelon::new(self.count());
        let mut out = Vec::new();
        for m in masks {
            if echelon.rank() == self.count() {
                break;
            }
            let row = self.moment_row(m);
            if !seen.insert(row.clone()) {
                continue;
            }
            if echelon.insert(&row) {
                out.push((m, row));
            }
        }
        out
    }
}

const PRIME: u64 = 0x1fff_ffff_ffff_ffff; // 2^61 − 1

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Incremental row echelon form over GF(2^61 − 1).
struct ModEchelon {
    width: usize,
    /// `(pivot column, row normalised to 1 at the pivot)`.
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    fn new(width: usize) -> Self {
        ModEchelon {
            width,
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, row: &[u64]) -> bool {
        let mut v: Vec<u64> = row.iter().map(|&x| x % PRIME).collect();
        for (p, r) in &self.rows {
            let c = v[*p];
            if c == 0 {
                continue;
            }
            for j in 0..self.width {
                if r[j] != 0 {
                    v[j] = (v[j] + PRIME - mulmod(c, r[j])) % PRIME;
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = powmod(v[p], PRIME - 2);
        for x in &mut v {
            *x = mulmod(*x, inv);
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Builtin;

    #[test]
    fn symmetric_functions_collapse_to_weight_classes() {
        let maj = BooleanFunction::builtin(Builtin::Maj, 5).unwrap();
        let orbits = Orbits::of(&maj);
        assert_eq!(orbits.count(), 6);
        for x in 0..32usize {
            let w = x.count_ones() as usize;
            let rep = orbits.representatives[orbits.orbit_of[x] as usize];
            assert_eq!(rep.count_ones() as usize, w);
        }
    }

    #[test]
    fn parity_uses_pair_flips() {
        let xor = BooleanFunction::builtin(Builtin::Parity, 4).unwrap();
        assert_eq!(Orbits::of(&xor).count(), 2);
    }

    #[test]
    fn composed_structure_found() {
        let maj = BooleanFunction::builtin(Builtin::Maj, 3).unwrap();
        let or = BooleanFunction::builtin(Builtin::Or, 2).unwrap();
        let xor = BooleanFunction::builtin(Builtin::Parity, 2).unwrap();
        let f = or.compose_with(&maj.compose_with(&xor).unwrap()).unwrap();
        assert_eq!(f.arity(), 12);
        // per MAJ block: number of odd pairs 0..3; OR: unordered pair of those.
        assert_eq!(Orbits::of(&f).count(), 10);
    }

    #[test]
    fn orbits_are_invariant_sets() {
        let f = BooleanFunction::parse_tt_literal("tt:4:6996").unwrap();
        let gens = detect(&f);
        let orbits = Orbits::from_generators(4, &gens);
        for g in &gens {
            for x in 0..16 {
                assert_eq!(orbits.orbit_of[x], orbits.orbit_of[g.apply(x)]);
                assert_eq!(f.value(x), f.value(g.apply(x)));
            }
        }
    }

    #[test]
    fn moment_rows_span() {
        let orbits = Orbits::trivial(3);
        assert_eq!(orbits.independent_moments(3).len(), 8);
        assert_eq!(orbits.independent_moments(1).len(), 4);
        assert_eq!(orbits.moment_row(0b011), vec![0, 0, 0, 1, 0, 0, 0, 1]);
    }
}
