//! The discriminantal arrangement `A_{k,n}`, its master-function weights and
//! the dense edges of its projective closure.
//!
//! The projective closure is handled by coning: coordinate `t_0` is adjoined,
//! every affine form is homogenized, and `H_∞ = {t_0 = 0}` is added. Edges of
//! the closure are the flats of the cone of codimension `1..=k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::combinatorics::{factorial_ratio, subsets};
use crate::error::{Error, Result};
use crate::exact_linalg::{format_rational, rat, sparse_from_dense, Rational, RowEchelon};
use crate::sl2_weight::HighestWeights;

/// Labels are 1-based, matching `H_i^j = {t_i = z_j}` and `H_{p,q} = {t_p = t_q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HyperplaneLabel {
    Pointwise { coord: usize, point: usize },
    Diagonal { p: usize, q: usize },
    Infinity,
}

impl fmt::Display for HyperplaneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperplaneLabel::Pointwise { coord, point } => write!(f, "H{coord}^{point}"),
            HyperplaneLabel::Diagonal { p, q } => write!(f, "H{p},{q}"),
            HyperplaneLabel::Infinity => write!(f, "Hinf"),
        }
    }
}

impl Serialize for HyperplaneLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `constant + Σ linear_i t_i`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: Rational,
    pub linear: Vec<Rational>,
}

impl AffineForm {
    /// Coefficients in `(t_0, t_1, ..., t_k)`.
    pub fn homogenized(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(self.linear.len() + 1);
        v.push(self.constant.clone());
        v.extend(self.linear.iter().cloned());
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub label: HyperplaneLabel,
    pub form: AffineForm,
}

#[derive(Debug, Clone)]
pub struct ArrangementSpec {
    k: usize,
    n: usize,
    z: Vec<Rational>,
    hyperplanes: Vec<Hyperplane>,
    index: HashMap<HyperplaneLabel, usize>,
}

pub fn default_z(n: usize) -> Vec<Rational> {
    (0..n as i64).map(rat).collect()
}

impl ArrangementSpec {
    /// All `H_i^j` ordered by `(j, i)`, then all `H_{p,q}` ordered by `(p, q)`.
    pub fn build(k: usize, n: usize, z: Option<Vec<Rational>>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidInput("k and n must be at least 1".into()));
        }
        let z = z.unwrap_or_else(|| default_z(n));
        if z.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z.len(),
            });
        }
        let distinct: BTreeSet<&Rational> = z.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidInput("z values must be distinct".into()));
        }
        let mut hyperplanes = Vec::with_capacity(k * n + k * (k - 1) / 2);
        for (j, zj) in z.iter().enumerate() {
            for i in 0..k {
                let mut linear = vec![Rational::zero(); k];
                linear[i] = rat(1);
                hyperplanes.push(Hyperplane {
                    label: HyperplaneLabel::Pointwise {
                        coord: i + 1,
                        point: j + 1,
                    },
                    form: AffineForm {
                        constant: -zj.clone(),
                        linear,
                    },
                });
            }
        }
        for p in 0..k {
            for q in p + 1..k {
                let mut linear = vec![Rational::zero(); k];
                linear[p] = rat(1);
                linear[q] = rat(-1);
                hyperplanes.push(Hyperplane {
                    label: HyperplaneLabel::Diagonal { p: p + 1, q: q + 1 },
                    form: AffineForm {
                        constant: Rational::zero(),
                        linear,
                    },
                });
            }
        }
        let index = hyperplanes
            .iter()
            .enumerate()
            .map(|(i, h)| (h.label, i))
            .collect();
        Ok(Self {
            k,
            n,
            z,
            hyperplanes,
            index,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z(&self) -> &[Rational] {
        &self.z
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn index_of(&self, label: &HyperplaneLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Homogenized forms of the cone: the affine hyperplanes in order, then `H_∞`.
    pub fn cone_forms(&self) -> Vec<Vec<Rational>> {
        let mut forms: Vec<Vec<Rational>> = self
            .hyperplanes
            .iter()
            .map(|h| h.form.homogenized())
            .collect();
        let mut inf = vec![Rational::zero(); self.k + 1];
        inf[0] = rat(1);
        forms.push(inf);
        forms
    }

    /// Label of cone index `i` (`len()` is `H_∞`).
    pub fn cone_label(&self, i: usize) -> HyperplaneLabel {
        if i == self.hyperplanes.len() {
            HyperplaneLabel::Infinity
        } else {
            self.hyperplanes[i].label
        }
    }
}

/// `q0 + q1/κ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicWeight {
    pub constant: Rational,
    pub kappa_inverse: Rational,
}

impl SymbolicWeight {
    pub fn new(constant: Rational, kappa_inverse: Rational) -> Self {
        Self {
            constant,
            kappa_inverse,
        }
    }

    pub fn from_ints(q0: i64, q1: i64) -> Self {
        Self::new(rat(q0), rat(q1))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    /// Integer for generic `κ`: the `κ⁻¹` part vanishes and the constant is integral.
    pub fn is_integer_generic(&self) -> bool {
        self.kappa_inverse.is_zero() && self.constant.is_integer()
    }

    pub fn in_nonnegative_integers(&self) -> bool {
        self.is_integer_generic() && !self.constant.is_negative()
    }

    pub fn in_positive_integers(&self) -> bool {
        self.is_integer_generic() && self.constant.is_positive()
    }
}

impl fmt::Display for SymbolicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + ({})/κ",
            format_rational(&self.constant),
            format_rational(&self.kappa_inverse)
        )
    }
}

impl Serialize for SymbolicWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SymbolicWeight", 2)?;
        st.serialize_field("q0", &format_rational(&self.constant))?;
        st.serialize_field("q1", &format_rational(&self.kappa_inverse))?;
        st.end()
    }
}

impl Add for SymbolicWeight {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.constant + rhs.constant,
            self.kappa_inverse + rhs.kappa_inverse,
        )
    }
}

impl AddAssign<&SymbolicWeight> for SymbolicWeight {
    fn add_assign(&mut self, rhs: &SymbolicWeight) {
        self.constant += &rhs.constant;
        self.kappa_inverse += &rhs.kappa_inverse;
    }
}

impl Neg for SymbolicWeight {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.constant, -self.kappa_inverse)
    }
}

/// Integer shifts `a_j` applied to the weights of the `H_i^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ShiftVector(pub Vec<i64>);

impl ShiftVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

fn check_m(m: &HighestWeights, spec: &ArrangementSpec) -> Result<()> {
    if m.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: m.n(),
        });
    }
    Ok(())
}

/// `λ^j_i = -m_j/κ`, `λ_{p,q} = 2/κ`.
pub fn master_weights(
    m: &HighestWeights,
    spec: &ArrangementSpec,
) -> Result<BTreeMap<HyperplaneLabel, SymbolicWeight>> {
    let w = shifted_weights(m, spec, &ShiftVector::zero(spec.n()))?;
    Ok(spec.hyperplanes().iter().map(|h| h.label).zip(w).collect())
}

/// `μ^j_i = a_j - m_j/κ`, `μ_{p,q} = 2/κ`, in hyperplane order.
pub fn shifted_weights(
    m: &HighestWeights,
    spec: &ArrangementSpec,
    a: &ShiftVector,
) -> Result<Vec<SymbolicWeight>> {
    check_m(m, spec)?;
    if a.0.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: a.0.len(),
        });
    }
    Ok(spec
        .hyperplanes()
        .iter()
        .map(|h| match h.label {
            HyperplaneLabel::Pointwise { point, .. } => {
                SymbolicWeight::from_ints(a.0[point - 1], -i64::from(m.as_slice()[point - 1]))
            }
            HyperplaneLabel::Diagonal { .. } => SymbolicWeight::from_ints(0, 2),
            HyperplaneLabel::Infinity => unreachable!("affine arrangement has no H_inf"),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeFamily {
    /// `L_I`, `2 <= |I| <= k`
    A,
    /// `L^j_I ∩ L_I`, `1 <= |I| <= k`
    B,
    /// `H_∞`
    C,
    /// `H_∞ ∩ L^{[n]}_i`
    D,
    /// `H_∞ ∩ L^{[n]}_I ∩ L_I`, `2 <= |I| < k`
    E,
}

impl EdgeFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeFamily::A => "a",
            EdgeFamily::B => "b",
            EdgeFamily::C => "c",
            EdgeFamily::D => "d",
            EdgeFamily::E => "e",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseEdge {
    pub family: EdgeFamily,
    /// `I ⊆ [k]`, 1-based.
    pub coords: Vec<usize>,
    /// `j` or `J ⊆ [n]`, 1-based.
    pub points: Vec<usize>,
    /// Hyperplanes of the projective closure containing the edge, sorted.
    pub hyperplanes: Vec<HyperplaneLabel>,
    pub codim: usize,
    pub weight: SymbolicWeight,
}

/// Wire form of an edge: `{"kind","codim","hyperplanes","weight","dense"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeRecord {
    pub kind: String,
    pub codim: usize,
    pub hyperplanes: Vec<HyperplaneLabel>,
    pub weight: SymbolicWeight,
    pub dense: bool,
}

impl From<&DenseEdge> for EdgeRecord {
    fn from(e: &DenseEdge) -> Self {
        EdgeRecord {
            kind: e.family.as_str().to_string(),
            codim: e.codim,
            hyperplanes: e.hyperplanes.clone(),
            weight: e.weight.clone(),
            dense: true,
        }
    }
}

fn diagonals_within(coords: &[usize]) -> impl Iterator<Item = HyperplaneLabel> + '_ {
    coords.iter().enumerate().flat_map(move |(x, &p)| {
        coords[x + 1..]
            .iter()
            .map(move |&q| HyperplaneLabel::Diagonal { p, q })
    })
}

/// Dense edges of the projective closure by family, with weights for the
/// shifted weight vector `μ`.
///
/// Families (d) and (e) both describe `{t_0 = 0, t_i = 0 (i ∈ I)}` in the
/// cone; every `H_i^j` with `i ∈ I` contains it regardless of `j`, so the
/// point set is always all of `[n]` and the weight is
/// `-(k-l)|a| + (k-l)(|m|-k-l+1)/κ` with `l = |I|`.
pub fn dense_edges_formula(
    k: usize,
    n: usize,
    m: &HighestWeights,
    a: &ShiftVector,
) -> Result<Vec<DenseEdge>> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidInput("k and n must be at least 1".into()));
    }
    if m.n() != n || a.0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if m.n() != n { m.n() } else { a.0.len() },
        });
    }
    let ki = k as i64;
    let mt = m.total() as i64;
    let at = a.total();
    let mut edges = Vec::new();
    let sorted = |mut v: Vec<HyperplaneLabel>| {
        v.sort();
        v
    };

    for l in 2..=k {
        for set in subsets(k, l) {
            let coords: Vec<usize> = set.iter().map(|i| i + 1).collect();
            let li = l as i64;
            edges.push(DenseEdge {
                family: EdgeFamily::A,
                hyperplanes: sorted(diagonals_within(&coords).collect()),
                coords,
                points: vec![],
                codim: l - 1,
                weight: SymbolicWeight::from_ints(0, li * (li - 1)),
            });
        }
    }

    for j in 1..=n {
        let mj = i64::from(m.as_slice()[j - 1]);
        let aj = a.0[j - 1];
        for l in 1..=k {
            for set in subsets(k, l) {
                let coords: Vec<usize> = set.iter().map(|i| i + 1).collect();
                let li = l as i64;
                let mut hs: Vec<HyperplaneLabel> = coords
                    .iter()
                    .map(|&c| HyperplaneLabel::Pointwise { coord: c, point: j })
                    .collect();
                hs.extend(diagonals_within(&coords));
                edges.push(DenseEdge {
                    family: EdgeFamily::B,
                    hyperplanes: sorted(hs),
                    coords,
                    points: vec![j],
                    codim: l,
                    weight: SymbolicWeight::from_ints(li * aj, li * (li - mj - 1)),
                });
            }
        }
    }

    edges.push(DenseEdge {
        family: EdgeFamily::C,
        coords: vec![],
        points: vec![],
        hyperplanes: vec![HyperplaneLabel::Infinity],
        codim: 1,
        weight: SymbolicWeight::from_ints(-ki * at, ki * (mt - ki + 1)),
    });

    if n >= 2 && k >= 2 {
        let all_points: Vec<usize> = (1..=n).collect();
        let at_infinity = |coords: &[usize]| {
            let mut hs = vec![HyperplaneLabel::Infinity];
            for &c in coords {
                for j in 1..=n {
                    hs.push(HyperplaneLabel::Pointwise { coord: c, point: j });
                }
            }
            hs.extend(diagonals_within(coords));
            sorted(hs)
        };
        for i in 1..=k {
            edges.push(DenseEdge {
                family: EdgeFamily::D,
                coords: vec![i],
                points: all_points.clone(),
                hyperplanes: at_infinity(&[i]),
                codim: 2,
                weight: SymbolicWeight::from_ints(-(ki - 1) * at, (ki - 1) * (mt - ki)),
            });
        }
        for l in 2..k {
            let li = l as i64;
            for set in subsets(k, l) {
                let coords: Vec<usize> = set.iter().map(|i| i + 1).collect();
                edges.push(DenseEdge {
                    family: EdgeFamily::E,
                    hyperplanes: at_infinity(&coords),
                    coords,
                    points: all_points.clone(),
                    codim: l + 1,
                    weight: SymbolicWeight::from_ints(
                        -(ki - li) * at,
                        (ki - li) * (mt - ki - li + 1),
                    ),
                });
            }
        }
    }
    Ok(edges)
}

/// Hard limits for exhaustive flat enumeration.
pub const BRUTEFORCE_MAX_HYPERPLANES: usize = 20;
pub const BRUTEFORCE_MAX_K: usize = 4;

/// A flat of the cone, with its density flag and weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFlat {
    /// Cone indices of the hyperplanes containing the flat, ascending.
    pub members: Vec<usize>,
    pub codim: usize,
    pub dense: bool,
    pub weight: SymbolicWeight,
}

fn rank_of(forms: &[Vec<Rational>], members: &[usize]) -> usize {
    let mut e = RowEchelon::new(forms.first().map_or(0, |f| f.len()));
    for &i in members {
        e.insert(sparse_from_dense(&forms[i]));
    }
    e.rank()
}

fn closure(forms: &[Vec<Rational>], members: &[usize]) -> Vec<usize> {
    let mut e = RowEchelon::new(forms.first().map_or(0, |f| f.len()));
    for &i in members {
        e.insert(sparse_from_dense(&forms[i]));
    }
    (0..forms.len())
        .filter(|&i| e.contains(&sparse_from_dense(&forms[i])))
        .collect()
}

/// Whether the central subarrangement `members` is irreducible: no split
/// into two nonempty parts whose ranks add up to the total rank.
fn is_irreducible(forms: &[Vec<Rational>], members: &[usize], rank: usize) -> bool {
    let size = members.len();
    if size <= 1 {
        return true;
    }
    // fix members[0] in the first part to visit each bipartition once
    let rest = size - 1;
    for mask in 0u64..(1u64 << rest) - 1 {
        let mut first = vec![members[0]];
        let mut second = Vec::new();
        for (b, &h) in members[1..].iter().enumerate() {
            if mask >> b & 1 == 1 {
                first.push(h);
            } else {
                second.push(h);
            }
        }
        if rank_of(forms, &first) + rank_of(forms, &second) == rank {
            return false;
        }
    }
    true
}

/// Flats of the cone of a spec with codimension `1..=k` and their density
/// flags; independent of weights, so one lattice serves many weight vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeLattice {
    hyperplanes: usize,
    /// `(members, codim, dense)` ordered by codimension then member list.
    flats: Vec<(Vec<usize>, usize, bool)>,
}

impl ConeLattice {
    pub fn new(spec: &ArrangementSpec) -> Result<Self> {
        let total = spec.len() + 1;
        if total > BRUTEFORCE_MAX_HYPERPLANES {
            return Err(Error::ScaleGuard {
                what: "hyperplanes in the projective closure".into(),
                value: total,
                limit: BRUTEFORCE_MAX_HYPERPLANES,
            });
        }
        if spec.k() > BRUTEFORCE_MAX_K {
            return Err(Error::ScaleGuard {
                what: "k".into(),
                value: spec.k(),
                limit: BRUTEFORCE_MAX_K,
            });
        }
        let forms = spec.cone_forms();
        let mut levels: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        levels.push((0..total).map(|i| vec![i]).collect());
        for _codim in 2..=spec.k() {
            let prev = levels.last().expect("at least one level");
            let mut next = BTreeSet::new();
            for flat in prev {
                for h in 0..total {
                    if flat.binary_search(&h).is_ok() {
                        continue;
                    }
                    let mut gen = flat.clone();
                    gen.push(h);
                    next.insert(closure(&forms, &gen));
                }
            }
            levels.push(next);
        }
        let flats = levels
            .into_iter()
            .enumerate()
            .flat_map(|(idx, level)| {
                let forms = &forms;
                level.into_iter().map(move |members| {
                    let dense = is_irreducible(forms, &members, idx + 1);
                    (members, idx + 1, dense)
                })
            })
            .collect();
        Ok(Self {
            hyperplanes: spec.len(),
            flats,
        })
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Flats with weights; `weights` are the affine hyperplane weights in
    /// hyperplane order and `H_∞` gets minus their sum.
    pub fn flats(&self, weights: &[SymbolicWeight]) -> Result<Vec<ConeFlat>> {
        if weights.len() != self.hyperplanes {
            return Err(Error::DimensionMismatch {
                expected: self.hyperplanes,
                got: weights.len(),
            });
        }
        let mut cone_weights: Vec<SymbolicWeight> = weights.to_vec();
        let inf = weights
            .iter()
            .fold(SymbolicWeight::zero(), |acc, w| acc + w.clone());
        cone_weights.push(-inf);
        Ok(self
            .flats
            .iter()
            .map(|(members, codim, dense)| {
                let mut weight = SymbolicWeight::zero();
                for &h in members {
                    weight += &cone_weights[h];
                }
                ConeFlat {
                    members: members.clone(),
                    codim: *codim,
                    dense: *dense,
                    weight,
                }
            })
            .collect())
    }
}

/// All flats of the cone of `spec` with codimension `1..=k`, each flagged
/// dense or not, ordered by codimension then member list.
///
/// `weights` are the affine hyperplane weights in hyperplane order; the
/// weight of `H_∞` is minus their sum.
pub fn cone_flats(spec: &ArrangementSpec, weights: &[SymbolicWeight]) -> Result<Vec<ConeFlat>> {
    ConeLattice::new(spec)?.flats(weights)
}

/// Exhaustive counterpart of [`dense_edges_formula`]: every edge of the
/// projective closure, as wire records with density flags.
pub fn dense_edges_bruteforce(
    spec: &ArrangementSpec,
    weights: &[SymbolicWeight],
) -> Result<Vec<EdgeRecord>> {
    records_from_lattice(spec, &ConeLattice::new(spec)?, weights)
}

fn records_from_lattice(
    spec: &ArrangementSpec,
    lattice: &ConeLattice,
    weights: &[SymbolicWeight],
) -> Result<Vec<EdgeRecord>> {
    Ok(lattice
        .flats(weights)?
        .into_iter()
        .map(|f| {
            let mut hyperplanes: Vec<HyperplaneLabel> =
                f.members.iter().map(|&i| spec.cone_label(i)).collect();
            hyperplanes.sort();
            EdgeRecord {
                kind: "bruteforce".into(),
                codim: f.codim,
                hyperplanes,
                weight: f.weight,
                dense: f.dense,
            }
        })
        .collect())
}

/// Sorted weights of the dense records.
pub fn dense_weight_multiset(records: &[EdgeRecord]) -> Vec<SymbolicWeight> {
    let mut w: Vec<SymbolicWeight> = records
        .iter()
        .filter(|r| r.dense)
        .map(|r| r.weight.clone())
        .collect();
    w.sort();
    w
}

/// Outcome of comparing [`dense_edges_formula`] with [`dense_edges_bruteforce`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub formula_count: usize,
    pub bruteforce_count: usize,
    pub weights_match: bool,
    pub edges_match: bool,
}

pub fn cross_validate(
    spec: &ArrangementSpec,
    m: &HighestWeights,
    a: &ShiftVector,
) -> Result<CrossValidation> {
    cross_validate_in(spec, &ConeLattice::new(spec)?, m, a)
}

/// [`cross_validate`] against a precomputed lattice of `spec`.
pub fn cross_validate_in(
    spec: &ArrangementSpec,
    lattice: &ConeLattice,
    m: &HighestWeights,
    a: &ShiftVector,
) -> Result<CrossValidation> {
    let formula: Vec<EdgeRecord> = dense_edges_formula(spec.k(), spec.n(), m, a)?
        .iter()
        .map(EdgeRecord::from)
        .collect();
    let weights = shifted_weights(m, spec, a)?;
    let brute: Vec<EdgeRecord> = records_from_lattice(spec, lattice, &weights)?
        .into_iter()
        .filter(|r| r.dense)
        .collect();
    let key = |r: &EdgeRecord| (r.hyperplanes.clone(), r.codim, r.weight.clone());
    let mut fk: Vec<_> = formula.iter().map(key).collect();
    let mut bk: Vec<_> = brute.iter().map(key).collect();
    fk.sort();
    bk.sort();
    Ok(CrossValidation {
        formula_count: formula.len(),
        bruteforce_count: brute.len(),
        weights_match: dense_weight_multiset(&formula) == dense_weight_multiset(&brute),
        edges_match: fk == bk,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMode {
    /// Every dense-edge weight avoids `Z_{>0}`.
    Comb,
    /// Every dense-edge weight avoids `Z_{>=0}`.
    Nonres,
}

pub fn nonresonance_verdict<'a>(
    weights: impl IntoIterator<Item = &'a SymbolicWeight>,
    mode: VerdictMode,
) -> bool {
    weights.into_iter().all(|w| match mode {
        VerdictMode::Comb => !w.in_positive_integers(),
        VerdictMode::Nonres => !w.in_nonnegative_integers(),
    })
}

/// `a_j = -1` when `m_j <= k-1`, else `0`; checked against the
/// nonresonance condition before returning.
///
/// `m_j = 0` needs the shift too: with `a_j = 0` the edge `H_i^j` itself
/// has weight exactly `0`.
pub fn find_shift(m: &HighestWeights, k: usize) -> Result<ShiftVector> {
    let k_i = k as i64;
    if k == 0 || (m.total() as i64) - k_i + 1 < k_i {
        return Err(Error::Precondition(format!(
            "find_shift requires |m|-k+1 >= k (m={m}, k={k})"
        )));
    }
    let a = ShiftVector(
        m.as_slice()
            .iter()
            .map(|&mj| if (mj as usize) < k { -1 } else { 0 })
            .collect(),
    );
    let edges = dense_edges_formula(k, m.n(), m, &a)?;
    if !nonresonance_verdict(edges.iter().map(|e| &e.weight), VerdictMode::Nonres) {
        return Err(Error::Internal(format!(
            "shift {:?} leaves a dense edge weight in Z>=0 (m={m}, k={k})",
            a.0
        )));
    }
    Ok(a)
}

/// `|χ(X(A_{k,n}))| = (n+k-2)!/(n-2)!`
pub fn euler_characteristic_magnitude(k: usize, n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "euler characteristic formula needs n >= 2, got n={n}"
        )));
    }
    Ok(factorial_ratio((n + k - 2) as u64, (n - 2) as u64))
}

/// Flats of the cone as label sets; two specs with equal signatures have
/// isomorphic intersection lattices under the label correspondence.
pub fn lattice_signature(spec: &ArrangementSpec) -> Result<BTreeSet<Vec<HyperplaneLabel>>> {
    let zero = vec![SymbolicWeight::zero(); spec.len()];
    Ok(cone_flats(spec, &zero)?
        .into_iter()
        .map(|f| {
            let mut v: Vec<HyperplaneLabel> =
                f.members.iter().map(|&i| spec.cone_label(i)).collect();
            v.sort();
            v
        })
        .collect())
}
