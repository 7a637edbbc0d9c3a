//! Gadget constructions over a base function `h`: the negation gadget, size-2
//! minimal sensitive blocks, depth-≤3 circuits of `h`-gates computing AND₂ and
//! OR₂, and randomized searches for `MAJ_n` as a projection of `MAJ₃^d` or
//! `(AND₂∘OR₂)^d`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::{
    bits_of, eval_power, Assignment, BooleanFunction, Builtin, FunctionClass, Projection, Target,
};
use crate::error::{Error, Result};

/// A wire of a circuit of `h`-gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wire {
    Const(bool),
    /// 1-based input of the simulated function.
    Var(usize),
    /// An `h`-gate; one child per input of `h`.
    Gate(Vec<Wire>),
}

impl Wire {
    /// Number of `h`-gates on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Wire::Gate(children) => 1 + children.iter().map(Wire::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn eval(&self, h: &BooleanFunction, y: usize) -> bool {
        match self {
            Wire::Const(b) => *b,
            Wire::Var(j) => (y >> (j - 1)) & 1 == 1,
            Wire::Gate(children) => {
                let idx = children.iter().enumerate().fold(0usize, |acc, (i, c)| {
                    if c.eval(h, y) {
                        acc | (1 << i)
                    } else {
                        acc
                    }
                });
                h.value(idx)
            }
        }
    }

    fn max_var(&self) -> usize {
        match self {
            Wire::Var(j) => *j,
            Wire::Const(_) => 0,
            Wire::Gate(c) => c.iter().map(Wire::max_var).max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationCircuit {
    pub base: BooleanFunction,
    pub root: Wire,
    pub target_arity: usize,
    pub depth: usize,
    pub verified: bool,
}

impl SimulationCircuit {
    pub fn new(base: BooleanFunction, root: Wire, target_arity: usize) -> Result<Self> {
        check_wire(&base, &root)?;
        if root.max_var() > target_arity {
            return Err(Error::ArityMismatch(format!(
                "circuit uses x{} but the target has arity {target_arity}",
                root.max_var()
            )));
        }
        Ok(SimulationCircuit {
            depth: root.depth(),
            base,
            root,
            target_arity,
            verified: false,
        })
    }

    pub fn table(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(self.target_arity, |y| self.root.eval(&self.base, y))
    }

    /// Embeds the circuit as a projection of `h^depth`, padding shallow
    /// branches with identity or double-negation restrictions of `h`.
    pub fn to_projection(&self) -> Result<Projection> {
        let pads = Pads::find(&self.base);
        let targets = embed(&self.base, &pads, &self.root, false, self.depth).ok_or_else(|| {
            Error::NotFound(format!(
                "no padding of the circuit into h^{} exists with restrictions of h",
                self.depth
            ))
        })?;
        Ok(Projection::new(targets))
    }
}

fn check_wire(h: &BooleanFunction, w: &Wire) -> Result<()> {
    match w {
        Wire::Var(0) => Err(Error::InvalidArgument("variables are 1-based".into())),
        Wire::Gate(c) if c.len() != h.arity() => Err(Error::ArityMismatch(format!(
            "gate with {} children for a base of arity {}",
            c.len(),
            h.arity()
        ))),
        Wire::Gate(c) => c.iter().try_for_each(|x| check_wire(h, x)),
        _ => Ok(()),
    }
}

/// Exhaustive equality against `target`; sets the verified flag on success.
pub fn verify_circuit(c: &mut SimulationCircuit, target: &BooleanFunction) -> Result<bool> {
    if target.arity() != c.target_arity {
        return Err(Error::ArityMismatch(format!(
            "circuit has target arity {}, function has arity {}",
            c.target_arity,
            target.arity()
        )));
    }
    let ok = (0..target.len()).all(|y| c.root.eval(&c.base, y) == target.value(y));
    c.verified = ok;
    Ok(ok)
}

/// Restriction of `h` to one free input that computes `¬x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegationGadget {
    pub fixed: Assignment,
    pub free: usize,
}

impl NegationGadget {
    fn gate(&self, arity: usize, input: Wire) -> Wire {
        restriction_gate(arity, &self.fixed, self.free, input)
    }
}

fn restriction_gate(arity: usize, fixed: &Assignment, free: usize, input: Wire) -> Wire {
    let mut input = Some(input);
    Wire::Gate(
        (1..=arity)
            .map(|k| {
                if k == free {
                    input.take().expect("free input used once")
                } else {
                    Wire::Const(fixed.entries[&k])
                }
            })
            .collect(),
    )
}

fn assignment_except(x: usize, arity: usize, free: usize) -> Assignment {
    bits_of(x, arity)
        .into_iter()
        .enumerate()
        .map(|(k, b)| (k + 1, b))
        .filter(|(k, _)| *k != free)
        .collect()
}

/// First `(x, i)` in index order with `x_i = 0`, `h(x) = 1`, `h(x ⊕ e_i) = 0`.
pub fn find_negation_gadget(h: &BooleanFunction) -> Option<NegationGadget> {
    find_flip(h, true)
}

/// Like the negation gadget but with `h(x) = 0`, `h(x ⊕ e_i) = 1`: a
/// restriction computing the identity.
pub fn find_identity_gadget(h: &BooleanFunction) -> Option<NegationGadget> {
    find_flip(h, false)
}

fn find_flip(h: &BooleanFunction, at_zero: bool) -> Option<NegationGadget> {
    let n = h.arity();
    for x in 0..h.len() {
        for i in 0..n {
            if (x >> i) & 1 == 0 && h.value(x) == at_zero && h.value(x | (1 << i)) != at_zero {
                return Some(NegationGadget {
                    fixed: assignment_except(x, n, i + 1),
                    free: i + 1,
                });
            }
        }
    }
    None
}

/// A point `x` and pair `i < j` (1-based) with `h(x) = h(x^i) = h(x^j) ≠ h(x^{ij})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitiveBlock {
    pub point: usize,
    pub indices: (usize, usize),
    /// `h(x)`: `false` gives a shifted AND₂, `true` a shifted OR₂.
    pub orientation: bool,
}

impl SensitiveBlock {
    /// Re-evaluates the four-point condition.
    pub fn holds_for(&self, h: &BooleanFunction) -> bool {
        let (i, j) = self.indices;
        if i == 0 || j == 0 || i == j || i.max(j) > h.arity() {
            return false;
        }
        let (ei, ej) = (1usize << (i - 1), 1usize << (j - 1));
        let x = self.point;
        let v = h.value(x);
        v == self.orientation
            && h.value(x ^ ei) == v
            && h.value(x ^ ej) == v
            && h.value(x ^ ei ^ ej) != v
    }
}

pub fn find_min_sensitive_block2(h: &BooleanFunction) -> Result<SensitiveBlock> {
    let class = h.classify();
    match class {
        FunctionClass::Parity | FunctionClass::NegParity | FunctionClass::Degenerate => {
            return Err(Error::Precondition(format!(
                "minimal sensitive blocks of size 2 need a non-parity function depending on all of at least 2 variables, got {class:?}"
            )))
        }
        _ => {}
    }
    let n = h.arity();
    for x in 0..h.len() {
        for i in 1..=n {
            for j in i + 1..=n {
                let b = SensitiveBlock {
                    point: x,
                    indices: (i, j),
                    orientation: h.value(x),
                };
                if b.holds_for(h) {
                    return Ok(b);
                }
            }
        }
    }
    Err(Error::Invariant(format!(
        "no size-2 minimal sensitive block in {h}"
    )))
}

fn require_monotone(h: &BooleanFunction) -> Result<()> {
    if !h.is_monotone() {
        return Err(Error::Precondition(format!("{h} is not monotone")));
    }
    Ok(())
}

/// Smallest-index minimal 1-input of weight ≥ 2, or `None` when every
/// minimal 1-input has weight ≤ 1 (OR, a dictator, or a constant).
pub fn find_minimal_one_input(h: &BooleanFunction) -> Result<Option<usize>> {
    require_monotone(h)?;
    let n = h.arity();
    Ok((0..h.len()).find(|&x| {
        x.count_ones() >= 2
            && h.value(x)
            && (0..n).all(|i| (x >> i) & 1 == 0 || !h.value(x & !(1 << i)))
    }))
}

/// Order dual: smallest-index maximal 0-input with at least two zeros.
pub fn find_maximal_zero_input(h: &BooleanFunction) -> Result<Option<usize>> {
    require_monotone(h)?;
    let n = h.arity();
    Ok((0..h.len()).find(|&x| {
        n - x.count_ones() as usize >= 2
            && !h.value(x)
            && (0..n).all(|i| (x >> i) & 1 == 1 || h.value(x | (1 << i)))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate2 {
    And,
    Or,
}

fn require_admissible(h: &BooleanFunction) -> Result<()> {
    match h.classify() {
        FunctionClass::MonotoneOther | FunctionClass::NonMonotoneOther => Ok(()),
        c => Err(Error::Precondition(format!(
            "AND₂/OR₂ simulation needs a function outside parity, AND, OR and degenerate ones, got {c:?}"
        ))),
    }
}

pub fn simulate_and2(h: &BooleanFunction) -> Result<SimulationCircuit> {
    simulate(h, Gate2::And)
}

pub fn simulate_or2(h: &BooleanFunction) -> Result<SimulationCircuit> {
    simulate(h, Gate2::Or)
}

pub fn simulate(h: &BooleanFunction, target: Gate2) -> Result<SimulationCircuit> {
    require_admissible(h)?;
    let n = h.arity();
    let root = if h.is_monotone() {
        let point = match target {
            Gate2::And => find_minimal_one_input(h)?,
            Gate2::Or => find_maximal_zero_input(h)?,
        }
        .ok_or_else(|| Error::Invariant(format!("monotone {h} has no usable extremal input")))?;
        // Keep the first two coordinates that are 1 (AND) or 0 (OR) free.
        let want = target == Gate2::And;
        let free: Vec<usize> = (0..n)
            .filter(|&i| ((point >> i) & 1 == 1) == want)
            .take(2)
            .collect();
        let children = (0..n)
            .map(|i| {
                if i == free[0] {
                    Wire::Var(1)
                } else if i == free[1] {
                    Wire::Var(2)
                } else {
                    Wire::Const((point >> i) & 1 == 1)
                }
            })
            .collect();
        Wire::Gate(children)
    } else {
        let neg = find_negation_gadget(h)
            .ok_or_else(|| Error::Invariant(format!("non-monotone {h} has no negation gadget")))?;
        let block = find_min_sensitive_block2(h)?;
        // On flips (u, v) of coordinates i, j the gate computes AND(u, v) when
        // h(x) = 0 and NAND(u, v) when h(x) = 1. OR₂ feeds u = ¬y; the output
        // is negated when the block orientation is opposite to the target.
        let negate_inputs = target == Gate2::Or;
        let (bi, bj) = block.indices;
        let children = (1..=n)
            .map(|k| {
                let xk = (block.point >> (k - 1)) & 1 == 1;
                let var = if k == bi {
                    1
                } else if k == bj {
                    2
                } else {
                    return Wire::Const(xk);
                };
                // Coordinate value is x_k ⊕ u with u = y or ¬y.
                if xk != negate_inputs {
                    neg.gate(n, Wire::Var(var))
                } else {
                    Wire::Var(var)
                }
            })
            .collect();
        let gate = Wire::Gate(children);
        let wants_nand_output = match target {
            Gate2::And => block.orientation,
            Gate2::Or => !block.orientation,
        };
        if wants_nand_output {
            neg.gate(n, gate)
        } else {
            gate
        }
    };
    let mut circuit = SimulationCircuit::new(h.clone(), root, 2)?;
    let expect = match target {
        Gate2::And => BooleanFunction::builtin(Builtin::And, 2)?,
        Gate2::Or => BooleanFunction::builtin(Builtin::Or, 2)?,
    };
    if !verify_circuit(&mut circuit, &expect)? {
        return Err(Error::Invariant(format!(
            "{target:?} circuit over {h} failed verification"
        )));
    }
    if circuit.depth > 3 {
        return Err(Error::Invariant(format!(
            "{target:?} circuit over {h} has depth {}",
            circuit.depth
        )));
    }
    Ok(circuit)
}

/// Depth-1 restrictions of `h` used to pad a circuit into `h^k`.
struct Pads {
    identity: Option<NegationGadget>,
    negation: Option<NegationGadget>,
    /// An input with `h = 0` and one with `h = 1`.
    const_points: [Option<usize>; 2],
}

impl Pads {
    fn find(h: &BooleanFunction) -> Self {
        Pads {
            identity: find_identity_gadget(h),
            negation: find_negation_gadget(h),
            const_points: [
                (0..h.len()).find(|&x| !h.value(x)),
                (0..h.len()).find(|&x| h.value(x)),
            ],
        }
    }
}

/// Leaves of `h^m` (depth-first order) realising `wire` (negated if `neg`).
fn embed(
    h: &BooleanFunction,
    pads: &Pads,
    wire: &Wire,
    neg: bool,
    m: usize,
) -> Option<Vec<Target>> {
    let t = h.arity();
    if let Wire::Const(c) = wire {
        let c = *c != neg;
        if m == 0 {
            return Some(vec![Target::Const(c)]);
        }
        let a = pads.const_points[c as usize]?;
        let mut out = Vec::new();
        for i in 0..t {
            out.extend(embed(
                h,
                pads,
                &Wire::Const((a >> i) & 1 == 1),
                false,
                m - 1,
            )?);
        }
        return Some(out);
    }
    let dw = wire.depth();
    if !neg && dw == m {
        return match wire {
            Wire::Var(j) => Some(vec![Target::Var(*j)]),
            Wire::Gate(children) => {
                let mut out = Vec::new();
                for c in children {
                    out.extend(embed(h, pads, c, false, m - 1)?);
                }
                Some(out)
            }
            Wire::Const(_) => unreachable!(),
        };
    }
    if m <= dw {
        return None;
    }
    for (pad, flips) in [(&pads.identity, false), (&pads.negation, true)] {
        let Some(pad) = pad else { continue };
        let Some(inner) = embed(h, pads, wire, neg != flips, m - 1) else {
            continue;
        };
        let mut out = Vec::new();
        let mut ok = true;
        for k in 1..=t {
            if k == pad.free {
                out.extend(inner.iter().cloned());
            } else {
                match embed(h, pads, &Wire::Const(pad.fixed.entries[&k]), false, m - 1) {
                    Some(v) => out.extend(v),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok {
            return Some(out);
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorityBase {
    Maj3,
    AndOr,
}

impl MajorityBase {
    pub fn function(self) -> BooleanFunction {
        match self {
            MajorityBase::Maj3 => BooleanFunction::builtin(Builtin::Maj, 3).expect("MAJ3"),
            MajorityBase::AndOr => {
                let and = BooleanFunction::builtin(Builtin::And, 2).expect("AND2");
                let or = BooleanFunction::builtin(Builtin::Or, 2).expect("OR2");
                and.compose_with(&or).expect("AND2∘OR2")
            }
        }
    }
}

impl std::str::FromStr for MajorityBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s
            .to_ascii_lowercase()
            .replace(['∘', ' ', '_', '-'], "")
            .as_str()
        {
            "maj3" | "maj" => Ok(MajorityBase::Maj3),
            "and2oor2" | "and2or2" | "andor" => Ok(MajorityBase::AndOr),
            _ => Err(Error::InvalidArgument(format!(
                "unknown majority base `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MajoritySearch {
    pub n: usize,
    pub base: MajorityBase,
    pub d_max: usize,
    pub seed: u64,
    pub attempts_per_depth: u64,
    /// Probability that a leaf is the constant 0 (AND₂∘OR₂ base only).
    pub const0_prob: f64,
    /// Probability that a leaf is the constant 1 (AND₂∘OR₂ base only).
    pub const1_prob: f64,
}

impl MajoritySearch {
    pub fn new(n: usize, base: MajorityBase, d_max: usize, seed: u64) -> Self {
        // For AND₂∘OR₂ the amplification map p ↦ (1 − (1 − p)²)² has its
        // repelling fixed point at (3 − √5)/2; a constant-0 rate of √5 − 2
        // moves inputs of weight n/2 exactly onto it.
        MajoritySearch {
            n,
            base,
            d_max,
            seed,
            attempts_per_depth: 100_000,
            const0_prob: if base == MajorityBase::AndOr {
                5f64.sqrt() - 2.0
            } else {
                0.0
            },
            const1_prob: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthStats {
    pub depth: usize,
    pub attempts: u64,
    pub found: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorityProjection {
    pub n: usize,
    pub base: MajorityBase,
    pub depth: usize,
    pub projection: Projection,
    pub seed: u64,
    pub stats: Vec<DepthStats>,
}

impl MajorityProjection {
    /// Evaluates `base^depth` under the projection on all `2^n` inputs.
    pub fn verify(&self) -> Result<bool> {
        let h = self.base.function();
        let maj = BooleanFunction::builtin(Builtin::Maj, self.n)?;
        let leaves = h.arity().pow(self.depth as u32);
        if self.projection.source_arity() != leaves || self.projection.max_var() > self.n {
            return Ok(false);
        }
        Ok((0..maj.len())
            .all(|y| eval_power(&h, self.depth, &self.projection.source_bits(y)) == maj.value(y)))
    }
}

/// Bitsets over all `2^n` inputs, evaluated bottom-up over a random tree.
struct BitTree {
    words: usize,
    var_masks: Vec<Vec<u64>>,
}

impl BitTree {
    fn new(n: usize) -> Self {
        let len = 1usize << n;
        let words = len.div_ceil(64);
        let var_masks = (0..n)
            .map(|j| {
                let mut m = vec![0u64; words];
                for y in 0..len {
                    if (y >> j) & 1 == 1 {
                        m[y / 64] |= 1 << (y % 64);
                    }
                }
                m
            })
            .collect();
        BitTree { words, var_masks }
    }

    fn leaf(&self, t: Target, len: usize) -> Vec<u64> {
        match t {
            Target::Var(j) => self.var_masks[j - 1].clone(),
            Target::Const(false) => vec![0; self.words],
            Target::Const(true) => {
                let mut m = vec![u64::MAX; self.words];
                if len % 64 != 0 {
                    m[self.words - 1] = (1u64 << (len % 64)) - 1;
                }
                m
            }
        }
    }

    fn eval(&self, base: MajorityBase, leaves: &[Target], len: usize) -> Vec<u64> {
        let mut level: Vec<Vec<u64>> = leaves.iter().map(|&t| self.leaf(t, len)).collect();
        let fan = match base {
            MajorityBase::Maj3 => 3,
            MajorityBase::AndOr => 4,
        };
        while level.len() > 1 {
            level = level
                .chunks(fan)
                .map(|c| {
                    (0..self.words)
                        .map(|w| match base {
                            MajorityBase::Maj3 => {
                                let (a, b, d) = (c[0][w], c[1][w], c[2][w]);
                                (a & b) | (a & d) | (b & d)
                            }
                            MajorityBase::AndOr => (c[0][w] | c[1][w]) & (c[2][w] | c[3][w]),
                        })
                        .collect()
                })
                .collect();
        }
        level.pop().unwrap_or_default()
    }
}

fn attempt_rng(seed: u64, depth: usize, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((depth as u64) << 48) ^ k);
    rng
}

fn random_leaves(s: &MajoritySearch, depth: usize, k: u64) -> Vec<Target> {
    let fan = s.base.function().arity();
    let count = fan.pow(depth as u32);
    let mut rng = attempt_rng(s.seed, depth, k);
    (0..count)
        .map(|_| {
            let r: f64 = rng.gen();
            if r < s.const0_prob {
                Target::Const(false)
            } else if r < s.const0_prob + s.const1_prob {
                Target::Const(true)
            } else {
                Target::Var(rng.gen_range(1..=s.n))
            }
        })
        .collect()
}

/// Searches `d = 1..=d_max` for a random leaf labelling of `base^d` that
/// computes `MAJ_n`, verifying each candidate on all `2^n` inputs. The
/// lowest successful attempt index wins, so results do not depend on the
/// thread count.
pub fn majority_projection(s: &MajoritySearch) -> Result<MajorityProjection> {
    if s.n % 2 == 0 || !(3..=9).contains(&s.n) {
        return Err(Error::InvalidArgument(format!(
            "n must be odd in 3..=9, got {}",
            s.n
        )));
    }
    let fan = s.base.function().arity();
    let max_leaves = 1usize << 20;
    let len = 1usize << s.n;
    let tree = BitTree::new(s.n);
    let maj = BooleanFunction::builtin(Builtin::Maj, s.n)?;
    let target = tree_target(&maj, tree.words);
    let mut stats = Vec::new();
    for d in 1..=s.d_max {
        if fan.checked_pow(d as u32).is_none_or(|l| l > max_leaves) {
            return Err(Error::LimitExceeded(format!(
                "base^{d} has too many leaves"
            )));
        }
        let chunk = 256u64;
        let mut tried = 0u64;
        let mut found = None;
        while tried < s.attempts_per_depth && found.is_none() {
            let end = (tried + chunk).min(s.attempts_per_depth);
            found = (tried..end).into_par_iter().find_first(|&k| {
                let leaves = random_leaves(s, d, k);
                tree.eval(s.base, &leaves, len) == target
            });
            tried = match found {
                Some(k) => k + 1,
                None => end,
            };
        }
        stats.push(DepthStats {
            depth: d,
            attempts: tried,
            found: found.is_some(),
        });
        if let Some(k) = found {
            let result = MajorityProjection {
                n: s.n,
                base: s.base,
                depth: d,
                projection: Projection::new(random_leaves(s, d, k)),
                seed: s.seed,
                stats,
            };
            if !result.verify()? {
                return Err(Error::Invariant(
                    "majority projection failed re-verification".into(),
                ));
            }
            return Ok(result);
        }
    }
    Err(Error::NotFound(format!(
        "MAJ_{} not found as a projection of {:?}^d for d ≤ {}: {}",
        s.n,
        s.base,
        s.d_max,
        stats
            .iter()
            .map(|st| format!("d={} tried {}", st.depth, st.attempts))
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

fn tree_target(f: &BooleanFunction, words: usize) -> Vec<u64> {
    let mut m = vec![0u64; words];
    for y in 0..f.len() {
        if f.value(y) {
            m[y / 64] |= 1 << (y % 64);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(kind: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(kind, n).unwrap()
    }

    fn nand() -> BooleanFunction {
        b(Builtin::And, 2).negate()
    }

    #[test]
    fn negation_gadgets() {
        let g = find_negation_gadget(&nand()).unwrap();
        assert_eq!(g.free, 2);
        assert_eq!(g.fixed, Assignment::new().with(1, true));
        assert!(find_negation_gadget(&b(Builtin::Maj, 3)).is_none());
        let not = b(Builtin::Not, 1);
        let g = find_negation_gadget(&not).unwrap();
        assert_eq!((g.free, g.fixed.len()), (1, 0));
    }

    #[test]
    fn sensitive_blocks() {
        let maj = find_min_sensitive_block2(&b(Builtin::Maj, 3)).unwrap();
        assert_eq!(
            maj,
            SensitiveBlock {
                point: 0,
                indices: (1, 2),
                orientation: false
            }
        );
        let nb = find_min_sensitive_block2(&nand()).unwrap();
        assert_eq!(
            nb,
            SensitiveBlock {
                point: 0,
                indices: (1, 2),
                orientation: true
            }
        );
        assert!(matches!(
            find_min_sensitive_block2(&b(Builtin::Parity, 3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn extremal_inputs() {
        assert_eq!(
            find_minimal_one_input(&b(Builtin::Maj, 3)).unwrap(),
            Some(0b011)
        );
        assert_eq!(find_minimal_one_input(&b(Builtin::Or, 3)).unwrap(), None);
        assert_eq!(
            find_minimal_one_input(&b(Builtin::And, 3)).unwrap(),
            Some(0b111)
        );
        assert!(find_minimal_one_input(&nand()).is_err());
        assert_eq!(find_maximal_zero_input(&b(Builtin::And, 3)).unwrap(), None);
    }

    #[test]
    fn and2_circuits() {
        let c = simulate_and2(&b(Builtin::Maj, 3)).unwrap();
        assert_eq!(c.depth, 1);
        assert_eq!(
            c.root,
            Wire::Gate(vec![Wire::Var(1), Wire::Var(2), Wire::Const(false)])
        );

        let c = simulate_and2(&nand()).unwrap();
        assert_eq!(c.depth, 2);
        let inner = Wire::Gate(vec![Wire::Var(1), Wire::Var(2)]);
        assert_eq!(c.root, Wire::Gate(vec![Wire::Const(true), inner]));
        assert!(c.verified);
    }

    #[test]
    fn verify_examples() {
        let maj = b(Builtin::Maj, 3);
        let and = b(Builtin::And, 2);
        let mut c = SimulationCircuit::new(
            maj.clone(),
            Wire::Gate(vec![Wire::Var(1), Wire::Var(2), Wire::Const(false)]),
            2,
        )
        .unwrap();
        assert!(verify_circuit(&mut c, &and).unwrap());
        let mut c = SimulationCircuit::new(
            maj,
            Wire::Gate(vec![Wire::Var(1), Wire::Var(2), Wire::Const(true)]),
            2,
        )
        .unwrap();
        assert!(!verify_circuit(&mut c, &and).unwrap());
        assert!(!c.verified);
    }

    #[test]
    fn projection_embedding() {
        let h = nand();
        for c in [simulate_and2(&h).unwrap(), simulate_or2(&h).unwrap()] {
            let p = c.to_projection().unwrap();
            let table = c.table().unwrap();
            for y in 0..4 {
                let x = bits_of(p.source_index(y), p.source_arity());
                assert_eq!(eval_power(&h, c.depth, &x), table.value(y));
            }
        }
    }

    #[test]
    fn majority_small() {
        let s = MajoritySearch::new(3, MajorityBase::Maj3, 3, 1);
        let r = majority_projection(&s).unwrap();
        assert_eq!(r.depth, 1);
        assert!(r.verify().unwrap());
        assert!(majority_projection(&MajoritySearch::new(4, MajorityBase::Maj3, 3, 1)).is_err());
    }
}
