//! Truth-table Boolean functions.
//!
//! A function on `n` inputs is stored as a packed bit table of length `2^n`.
//! Entry `k` is `f(x)` where `x_i` is bit `i - 1` of `k`, so `x_1` is the
//! least-significant bit of the table index. Variables are 1-based in every
//! public signature (assignments, projections, `depends_on`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported arity: tables hold at most `2^24` entries.
pub const MAX_ARITY: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Builtin {
    And,
    Or,
    Maj,
    Parity,
    Not,
    Id,
    Const0,
    Const1,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "AND" => Builtin::And,
            "OR" => Builtin::Or,
            "MAJ" => Builtin::Maj,
            "PARITY" | "XOR" => Builtin::Parity,
            "NOT" => Builtin::Not,
            "ID" => Builtin::Id,
            "CONST0" => Builtin::Const0,
            "CONST1" => Builtin::Const1,
            _ => return Err(Error::UnknownBuiltin(s.to_string())),
        })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Builtin::And => "AND",
            Builtin::Or => "OR",
            Builtin::Maj => "MAJ",
            Builtin::Parity => "XOR",
            Builtin::Not => "NOT",
            Builtin::Id => "ID",
            Builtin::Const0 => "CONST0",
            Builtin::Const1 => "CONST1",
        };
        f.write_str(s)
    }
}

/// Partial assignment of constants to variables (1-based keys).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub entries: BTreeMap<usize, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: usize, value: bool) -> Self {
        self.entries.insert(var, value);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(usize, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (usize, bool)>>(iter: I) -> Self {
        Assignment {
            entries: iter.into_iter().collect(),
        }
    }
}

/// What a source input of a projection is wired to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    Const(bool),
    /// 1-based variable of the projected function.
    Var(usize),
}

/// Substitution of constants or target variables for every input of a source
/// function: `f(x_1..x_t) = g(a_1..a_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    pub targets: Vec<Target>,
}

impl Projection {
    pub fn new(targets: Vec<Target>) -> Self {
        Projection { targets }
    }

    pub fn source_arity(&self) -> usize {
        self.targets.len()
    }

    pub fn max_var(&self) -> usize {
        self.targets
            .iter()
            .filter_map(|t| match t {
                Target::Var(j) => Some(*j),
                Target::Const(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Source input bits for target input `y`; unlike `source_index` this
    /// works for sources wider than a machine word.
    pub fn source_bits(&self, y: usize) -> Vec<bool> {
        self.targets
            .iter()
            .map(|t| match *t {
                Target::Const(b) => b,
                Target::Var(j) => (y >> (j - 1)) & 1 == 1,
            })
            .collect()
    }

    /// Source input bits (as a table index of the source) for target input `y`.
    pub fn source_index(&self, y: usize) -> usize {
        let mut idx = 0usize;
        for (k, t) in self.targets.iter().enumerate() {
            let bit = match *t {
                Target::Const(b) => b,
                Target::Var(j) => (y >> (j - 1)) & 1 == 1,
            };
            if bit {
                idx |= 1 << k;
            }
        }
        idx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionClass {
    Parity,
    NegParity,
    And,
    Or,
    MonotoneOther,
    NonMonotoneOther,
    Degenerate,
}

fn words_for(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_ARITY {
        return Err(Error::LimitExceeded(format!(
            "arity {arity} exceeds the table cap of 2^{MAX_ARITY} entries"
        )));
    }
    Ok(())
}

impl BooleanFunction {
    /// All-zero function of the given arity.
    pub fn zeros(arity: usize) -> Result<Self> {
        check_arity(arity)?;
        Ok(BooleanFunction {
            arity,
            words: vec![0; words_for(arity)],
        })
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut out = Self::zeros(arity)?;
        for k in 0..out.len() {
            if f(k) {
                out.set(k, true);
            }
        }
        Ok(out)
    }

    /// Function whose table, read as an integer, is `bits` (arity ≤ 6).
    pub fn from_u64(arity: usize, bits: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::InvalidArgument(format!(
                "from_u64 supports arity ≤ 6, got {arity}"
            )));
        }
        let len = 1usize << arity;
        if len < 64 && bits >> len != 0 {
            return Err(Error::InvalidArgument(format!(
                "table value {bits:#x} does not fit 2^{arity} entries"
            )));
        }
        Ok(BooleanFunction {
            arity,
            words: vec![bits],
        })
    }

    pub fn builtin(kind: Builtin, arity: usize) -> Result<Self> {
        match kind {
            Builtin::And | Builtin::Or | Builtin::Parity | Builtin::Maj if arity == 0 => {
                return Err(Error::InvalidArgument(format!("{kind} needs arity ≥ 1")))
            }
            Builtin::Maj if arity % 2 == 0 => {
                return Err(Error::InvalidArgument(format!(
                    "MAJ needs odd arity, got {arity}"
                )))
            }
            Builtin::Not | Builtin::Id if arity != 1 => {
                return Err(Error::InvalidArgument(format!("{kind} has arity 1")))
            }
            _ => {}
        }
        let full = (1usize << arity) - 1;
        Self::from_fn(arity, |k| match kind {
            Builtin::And => k == full,
            Builtin::Or => k != 0,
            Builtin::Maj => 2 * k.count_ones() as usize > arity,
            Builtin::Parity => k.count_ones() % 2 == 1,
            Builtin::Not => k == 0,
            Builtin::Id => k == 1,
            Builtin::Const0 => false,
            Builtin::Const1 => true,
        })
    }

    /// The function `x ↦ x_i` on `arity` inputs.
    pub fn dictator(arity: usize, var: usize) -> Result<Self> {
        if var == 0 || var > arity {
            return Err(Error::InvalidArgument(format!(
                "variable {var} out of range 1..={arity}"
            )));
        }
        Self::from_fn(arity, |k| (k >> (var - 1)) & 1 == 1)
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of table entries, `2^arity`.
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn value(&self, index: usize) -> bool {
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, index: usize, v: bool) {
        let w = &mut self.words[index >> 6];
        if v {
            *w |= 1 << (index & 63);
        } else {
            *w &= !(1 << (index & 63));
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "input of length {} for a function of arity {}",
                x.len(),
                self.arity
            )));
        }
        Ok(self.value(index_of(x)))
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_constant(&self) -> Option<bool> {
        match self.weight() {
            0 => Some(false),
            w if w == self.len() => Some(true),
            _ => None,
        }
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if self.arity < 6 {
            out.words[0] &= (1u64 << self.len()) - 1;
        }
        out
    }

    /// `x ↦ f(x ⊕ e_var)`.
    pub fn negate_input(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        let bit = 1 << (var - 1);
        Self::from_fn(self.arity, |k| self.value(k ^ bit))
    }

    /// `x ↦ f(y)` where input `i` of `f` reads `x_{perm[i]}` (all 1-based).
    pub fn permute_inputs(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "permutation of length {} for arity {}",
                perm.len(),
                self.arity
            )));
        }
        let mut seen = vec![false; self.arity];
        for &p in perm {
            if p == 0 || p > self.arity || seen[p - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p - 1] = true;
        }
        Self::from_fn(self.arity, |k| {
            let mut y = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                if (k >> (p - 1)) & 1 == 1 {
                    y |= 1 << i;
                }
            }
            self.value(y)
        })
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var == 0 || var > self.arity {
            return Err(Error::InvalidArgument(format!(
                "variable {var} out of range 1..={}",
                self.arity
            )));
        }
        Ok(())
    }

    /// `f ∘ (g_1, …, g_n)` with input blocks concatenated left to right.
    pub fn compose(&self, inner: &[BooleanFunction]) -> Result<Self> {
        if inner.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "outer arity {} but {} inner functions",
                self.arity,
                inner.len()
            )));
        }
        let total: usize = inner.iter().map(|g| g.arity).sum();
        check_arity(total)?;
        let offsets: Vec<usize> = inner
            .iter()
            .scan(0, |acc, g| {
                let o = *acc;
                *acc += g.arity;
                Some(o)
            })
            .collect();
        Self::from_fn(total, |k| {
            let mut y = 0usize;
            for (i, g) in inner.iter().enumerate() {
                let block = (k >> offsets[i]) & ((1 << g.arity) - 1);
                if g.value(block) {
                    y |= 1 << i;
                }
            }
            self.value(y)
        })
    }

    /// `f ∘ g` with `arity(f)` copies of `g`.
    pub fn compose_with(&self, g: &BooleanFunction) -> Result<Self> {
        let copies = vec![g.clone(); self.arity];
        self.compose(&copies)
    }

    /// `h^d`: the complete `arity(h)`-ary tree of depth `d`, leaves labelled
    /// depth-first left to right.
    pub fn power(&self, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("power needs d ≥ 1".into()));
        }
        let leaves = (self.arity as u128)
            .checked_pow(d as u32)
            .unwrap_or(u128::MAX);
        if leaves > MAX_ARITY as u128 {
            return Err(Error::LimitExceeded(format!(
                "h^{d} has {leaves} inputs, above the cap of {MAX_ARITY}"
            )));
        }
        let mut acc = self.clone();
        for _ in 1..d {
            acc = self.compose_with(&acc)?;
        }
        Ok(acc)
    }

    /// Function on the unassigned variables, original relative order kept.
    pub fn restrict(&self, a: &Assignment) -> Result<Self> {
        let mut fixed = 0usize;
        for (&var, &v) in &a.entries {
            self.check_var(var)?;
            if v {
                fixed |= 1 << (var - 1);
            }
        }
        let free: Vec<usize> = (1..=self.arity)
            .filter(|v| !a.entries.contains_key(v))
            .collect();
        Self::from_fn(free.len(), |y| {
            let mut k = fixed;
            for (j, &var) in free.iter().enumerate() {
                if (y >> j) & 1 == 1 {
                    k |= 1 << (var - 1);
                }
            }
            self.value(k)
        })
    }

    pub fn apply_projection(&self, p: &Projection, target_arity: usize) -> Result<Self> {
        if p.source_arity() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "projection has {} sources, function has arity {}",
                p.source_arity(),
                self.arity
            )));
        }
        if p.targets.contains(&Target::Var(0)) {
            return Err(Error::InvalidArgument(
                "projection variables are 1-based".into(),
            ));
        }
        if p.max_var() > target_arity {
            return Err(Error::ArityMismatch(format!(
                "projection refers to x{} but target arity is {target_arity}",
                p.max_var()
            )));
        }
        Self::from_fn(target_arity, |y| self.value(p.source_index(y)))
    }

    pub fn depends_on(&self, var: usize) -> Result<bool> {
        self.check_var(var)?;
        let bit = 1 << (var - 1);
        Ok((0..self.len()).any(|k| k & bit == 0 && self.value(k) != self.value(k | bit)))
    }

    pub fn depends_on_all(&self) -> bool {
        (1..=self.arity).all(|v| self.depends_on(v).unwrap_or(false))
    }

    /// `f(x) ≤ f(y)` whenever `x ≤ y` coordinatewise.
    pub fn is_monotone(&self) -> bool {
        (0..self.len()).all(|k| !self.value(k) || (0..self.arity).all(|i| self.value(k | (1 << i))))
    }

    pub fn classify(&self) -> FunctionClass {
        let n = self.arity;
        if n < 2 || !self.depends_on_all() {
            return FunctionClass::Degenerate;
        }
        let named = [
            (Builtin::Parity, FunctionClass::Parity),
            (Builtin::And, FunctionClass::And),
            (Builtin::Or, FunctionClass::Or),
        ];
        for (b, class) in named {
            if let Ok(g) = Self::builtin(b, n) {
                if *self == g {
                    return class;
                }
            }
        }
        if *self == Self::builtin(Builtin::Parity, n).expect("parity").negate() {
            return FunctionClass::NegParity;
        }
        if self.is_monotone() {
            FunctionClass::MonotoneOther
        } else {
            FunctionClass::NonMonotoneOther
        }
    }

    /// Maximum number of sensitive coordinates over all inputs.
    pub fn max_sensitivity(&self) -> usize {
        (0..self.len())
            .map(|k| {
                (0..self.arity)
                    .filter(|&i| self.value(k) != self.value(k ^ (1 << i)))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// `tt:<arity>:<hex>` literal; bit `k` of the hex value is entry `k`.
    pub fn to_tt_literal(&self) -> String {
        format!("tt:{}:{}", self.arity, self.table_hex())
    }

    /// Table as a big-endian hex string with `max(1, 2^n / 4)` digits.
    pub fn table_hex(&self) -> String {
        if self.arity < 6 {
            let digits = (self.len() / 4).max(1);
            format!("{:0width$x}", self.words[0], width = digits)
        } else {
            self.words
                .iter()
                .rev()
                .map(|w| format!("{w:016x}"))
                .collect()
        }
    }

    pub fn from_table_hex(arity: usize, hex: &str) -> Result<Self> {
        let digits = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex);
        if digits.is_empty() {
            return Err(Error::InvalidArgument("empty hex table".into()));
        }
        let mut out = Self::zeros(arity)?;
        for (pos, c) in digits.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidArgument(format!("bad hex digit `{c}`")))?;
            for b in 0..4 {
                if (nibble >> b) & 1 == 1 {
                    let k = pos * 4 + b as usize;
                    if k >= out.len() {
                        return Err(Error::InvalidArgument(format!(
                            "hex table has bits beyond 2^{arity} entries"
                        )));
                    }
                    out.set(k, true);
                }
            }
        }
        Ok(out)
    }

    pub fn parse_tt_literal(s: &str) -> Result<Self> {
        let rest = s
            .strip_prefix("tt:")
            .ok_or_else(|| Error::InvalidArgument(format!("`{s}` is not a tt: literal")))?;
        let (arity, hex) = rest
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("`{s}` lacks a hex table")))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad arity in `{s}`")))?;
        Self::from_table_hex(arity, hex)
    }

    /// Every function of the given arity, in table order (arity ≤ 4).
    pub fn all(arity: usize) -> impl Iterator<Item = BooleanFunction> {
        assert!(arity <= 4, "enumeration is limited to arity ≤ 4");
        let count = 1u64 << (1u64 << arity);
        (0..count).map(move |v| Self::from_u64(arity, v).expect("fits"))
    }
}

/// Table index of a bit list (`x[0]` is `x_1`, the least-significant bit).
pub fn index_of(x: &[bool]) -> usize {
    x.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| if b { acc | (1 << i) } else { acc })
}

/// Bit list of a table index.
pub fn bits_of(index: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|i| (index >> i) & 1 == 1).collect()
}

/// Evaluate `h^d` at one input without materialising its table.
pub fn eval_power(h: &BooleanFunction, d: usize, x: &[bool]) -> bool {
    let t = h.arity();
    if d == 0 {
        return x[0];
    }
    let sub = x.len() / t;
    let mut idx = 0usize;
    for i in 0..t {
        if eval_power(h, d - 1, &x[i * sub..(i + 1) * sub]) {
            idx |= 1 << i;
        }
    }
    h.value(idx)
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({})", self.to_tt_literal())
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tt_literal())
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    arity: usize,
    table_hex: String,
}

impl Serialize for BooleanFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            arity: self.arity,
            table_hex: self.table_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BooleanFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TableRepr::deserialize(d)?;
        BooleanFunction::from_table_hex(r.arity, &r.table_hex).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(b: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(b, n).unwrap()
    }

    #[test]
    fn builtin_tables() {
        assert_eq!(
            f(Builtin::And, 2),
            BooleanFunction::from_u64(2, 0b1000).unwrap()
        );
        assert_eq!(
            f(Builtin::Parity, 2),
            BooleanFunction::from_u64(2, 0b0110).unwrap()
        );
        let maj = f(Builtin::Maj, 3);
        for k in 0..8usize {
            assert_eq!(maj.value(k), k.count_ones() >= 2);
        }
        assert!(BooleanFunction::builtin(Builtin::Maj, 4).is_err());
        assert!("FOO".parse::<Builtin>().is_err());
        assert_eq!(f(Builtin::Const1, 0).value(0), true);
    }

    #[test]
    fn evaluate_examples() {
        assert!(f(Builtin::Maj, 3).evaluate(&[true, true, false]).unwrap());
        assert!(!f(Builtin::And, 2).evaluate(&[true, false]).unwrap());
        assert!(!f(Builtin::Parity, 2).evaluate(&[true, true]).unwrap());
        assert!(f(Builtin::And, 2).evaluate(&[true]).is_err());
    }

    #[test]
    fn compose_examples() {
        let and = f(Builtin::And, 2);
        let or = f(Builtin::Or, 2);
        let c = and.compose(&[or.clone(), or]).unwrap();
        assert!(!c.evaluate(&[true, false, false, false]).unwrap());

        let xor = f(Builtin::Parity, 2);
        let c = and.compose_with(&xor).unwrap();
        for k in 0..16usize {
            let x = bits_of(k, 4);
            assert_eq!(c.value(k), (x[0] ^ x[1]) && (x[2] ^ x[3]));
        }
        assert!(and.compose(&[xor]).is_err());
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let id = f(Builtin::Id, 1);
        for n in 0..=3 {
            for g in BooleanFunction::all(n) {
                assert_eq!(g.compose(&vec![id.clone(); n]).unwrap(), g);
            }
        }
    }

    #[test]
    fn power_examples() {
        let maj = f(Builtin::Maj, 3);
        assert_eq!(maj.power(1).unwrap(), maj);
        let m2 = maj.power(2).unwrap();
        assert_eq!(m2.arity(), 9);
        let x = [true, true, false, false, false, false, true, false, true];
        assert!(m2.evaluate(&x).unwrap());
        assert!(eval_power(&maj, 2, &x));
        let ao = f(Builtin::And, 2).compose_with(&f(Builtin::Or, 2)).unwrap();
        assert_eq!(ao.power(2).unwrap().arity(), 16);
    }

    #[test]
    fn power_cap() {
        let maj = f(Builtin::Maj, 3);
        assert!(matches!(maj.power(3), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn restrict_examples() {
        let maj = f(Builtin::Maj, 3);
        assert_eq!(
            maj.restrict(&Assignment::new().with(3, false)).unwrap(),
            f(Builtin::And, 2)
        );
        assert_eq!(
            maj.restrict(&Assignment::new().with(3, true)).unwrap(),
            f(Builtin::Or, 2)
        );
        let r = f(Builtin::And, 2)
            .restrict(&Assignment::new().with(1, false))
            .unwrap();
        assert_eq!(r, BooleanFunction::constant(1, false).unwrap());
        assert!(maj.restrict(&Assignment::new().with(4, false)).is_err());
    }

    #[test]
    fn projection_examples() {
        use Target::*;
        let maj = f(Builtin::Maj, 3);
        let p = Projection::new(vec![Var(1), Var(2), Const(false)]);
        assert_eq!(maj.apply_projection(&p, 2).unwrap(), f(Builtin::And, 2));
        let p = Projection::new(vec![Var(1), Var(1), Const(false)]);
        assert_eq!(maj.apply_projection(&p, 1).unwrap(), f(Builtin::Id, 1));
        let p = Projection::new(vec![Var(1), Var(1)]);
        assert_eq!(
            f(Builtin::And, 2).apply_projection(&p, 1).unwrap(),
            f(Builtin::Id, 1)
        );
        let p = Projection::new(vec![Var(3), Var(1)]);
        assert!(f(Builtin::And, 2).apply_projection(&p, 2).is_err());
    }

    #[test]
    fn depends_on_examples() {
        let x1 = BooleanFunction::dictator(2, 1).unwrap();
        assert!(!x1.depends_on(2).unwrap());
        assert!(f(Builtin::Maj, 3).depends_on(1).unwrap());
        assert!(f(Builtin::Maj, 3).depends_on(4).is_err());
    }

    #[test]
    fn dependent_census_matches_inclusion_exclusion() {
        let count = BooleanFunction::all(3)
            .filter(|g| g.depends_on_all())
            .count();
        // Functions on 3 bits ignoring a given set of k variables: 2^(2^(3-k)).
        let oracle = 256 - 3 * 16 + 3 * 4 - 2;
        assert_eq!(oracle, 218);
        assert_eq!(count, oracle);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(f(Builtin::Parity, 3).classify(), FunctionClass::Parity);
        assert_eq!(
            f(Builtin::Parity, 3).negate().classify(),
            FunctionClass::NegParity
        );
        assert_eq!(f(Builtin::Maj, 3).classify(), FunctionClass::MonotoneOther);
        assert_eq!(
            f(Builtin::And, 2).negate().classify(),
            FunctionClass::NonMonotoneOther
        );
        assert_eq!(f(Builtin::Or, 4).classify(), FunctionClass::Or);
        assert_eq!(
            BooleanFunction::dictator(2, 1).unwrap().classify(),
            FunctionClass::Degenerate
        );
    }

    #[test]
    fn tt_literal_format() {
        let maj = f(Builtin::Maj, 3);
        assert_eq!(maj.to_tt_literal(), "tt:3:e8");
        assert_eq!(BooleanFunction::parse_tt_literal("tt:3:0xe8").unwrap(), maj);
        assert_eq!(
            BooleanFunction::parse_tt_literal("tt:3:0x17").unwrap(),
            maj.negate()
        );
        assert!(BooleanFunction::parse_tt_literal("tt:2:0x17").is_err());
        let big = f(Builtin::Parity, 7);
        assert_eq!(
            BooleanFunction::parse_tt_literal(&big.to_tt_literal()).unwrap(),
            big
        );
        let json = serde_json::to_string(&maj).unwrap();
        assert_eq!(json, r#"{"arity":3,"table_hex":"e8"}"#);
        let back: BooleanFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, maj);
    }
}
