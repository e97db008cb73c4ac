use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::{CycleType, Partition};
use crate::error::{Error, Result};
use crate::exactla::Scalar;

type Memo = Mutex<HashMap<(Vec<usize>, Vec<usize>), i64>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `χ_λ(μ)` by Murnaghan–Nakayama: remove a border strip of length `μ_1`, recurse on the
/// rest of `μ`, and weight by `(−1)^{height}`.
pub fn mn_character(lambda: &Partition, mu: &CycleType) -> Result<i64> {
    if lambda.n() != mu.0.n() {
        return Err(Error::DimensionMismatch { expected: lambda.n(), found: mu.0.n() });
    }
    Ok(chi(lambda.parts(), mu.0.parts()))
}

fn chi(lambda: &[usize], mu: &[usize]) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo().lock().expect("memo lock").get(&key) {
        return v;
    }
    // Border strips of length k correspond to moving a bead of the beta-set from b to
    // b − k onto an empty position; the height is the number of beads jumped over.
    let k = mu[0];
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let jumped = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let m = moved.len();
        let rest: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(j, &c)| c - (m - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * chi(&rest, &mu[1..]);
    }
    memo().lock().expect("memo lock").insert(key, total);
    total
}

/// Multiplicities `m_λ` of irreducible characters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityMap(BTreeMap<Partition, u64>);

impl MultiplicityMap {
    /// Drops zero entries.
    pub fn from_map(mut map: BTreeMap<Partition, u64>) -> Self {
        map.retain(|_, v| *v > 0);
        MultiplicityMap(map)
    }

    pub fn get(&self, lambda: &Partition) -> u64 {
        self.0.get(lambda).copied().unwrap_or(0)
    }

    /// Nonzero entries, `(n)` first.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u64)> {
        self.0.iter().map(|(p, &m)| (p, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ m_λ f_λ`, the dimension of the module.
    pub fn weighted_total(&self) -> u64 {
        self.0.iter().map(|(p, m)| m * p.dimension()).sum()
    }

    /// Whether `self[λ] ≤ other[λ]` for every `λ`.
    pub fn dominated_by(&self, other: &MultiplicityMap) -> bool {
        self.0.iter().all(|(p, &m)| m <= other.get(p))
    }
}

impl fmt::Display for MultiplicityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(p, m)| format!("{p}:{m}")).collect();
        f.write_str(&items.join(", "))
    }
}

impl Serialize for MultiplicityMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(p, m)| (p.to_string(), m)))
    }
}

/// `m_λ = (1/n!) Σ_μ |class μ| · trace(μ) · χ_λ(μ)`, checked to be a non-negative integer.
pub fn decompose(traces: &BTreeMap<CycleType, Scalar>, n: usize) -> Result<MultiplicityMap> {
    let classes = CycleType::all(n);
    for c in &classes {
        if !traces.contains_key(c) {
            return Err(Error::InconsistentBasis(format!("no trace for cycle type {c}")));
        }
    }
    let fact: BigInt = (1..=n as u64).product::<u64>().into();
    let mut out = BTreeMap::new();
    for lambda in Partition::all(n) {
        let mut acc = Scalar::zero();
        for c in &classes {
            let weight = Scalar::from_int(c.class_size() as i64 * mn_character(&lambda, c)?);
            acc += &(&weight * &traces[c]);
        }
        let m = acc / Scalar::from_big(fact.clone().into());
        let value = (m.is_integer() && !m.is_negative()).then(|| m.numer()).and_then(|v| v.to_u64());
        match value {
            Some(v) => {
                out.insert(lambda, v);
            }
            None => {
                return Err(Error::BadMultiplicity { partition: lambda.to_string(), value: m.to_string() })
            }
        }
    }
    Ok(MultiplicityMap::from_map(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn c(parts: &[usize]) -> CycleType {
        CycleType(p(parts))
    }

    #[test]
    fn standard_character_of_s3() {
        let l = p(&[2, 1]);
        assert_eq!(mn_character(&l, &c(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(mn_character(&l, &c(&[2, 1])).unwrap(), 0);
        assert_eq!(mn_character(&l, &c(&[3])).unwrap(), -1);
    }

    #[test]
    fn trivial_and_sign() {
        for mu in CycleType::all(5) {
            assert_eq!(mn_character(&p(&[5]), &mu).unwrap(), 1);
            assert_eq!(mn_character(&p(&[1, 1, 1, 1, 1]), &mu).unwrap(), mu.sign());
        }
        assert!(mn_character(&p(&[2]), &c(&[1, 1, 1])).is_err());
    }

    #[test]
    fn regular_representation_of_s3() {
        let traces: BTreeMap<CycleType, Scalar> = CycleType::all(3)
            .into_iter()
            .map(|t| {
                let v = if t.0.parts() == [1, 1, 1] { 6 } else { 0 };
                (t, Scalar::from_int(v))
            })
            .collect();
        let m = decompose(&traces, 3).unwrap();
        assert_eq!(m.get(&p(&[3])), 1);
        assert_eq!(m.get(&p(&[2, 1])), 2);
        assert_eq!(m.get(&p(&[1, 1, 1])), 1);
    }

    #[test]
    fn trivial_module() {
        let traces = CycleType::all(4).into_iter().map(|t| (t, Scalar::one())).collect();
        let m = decompose(&traces, 4).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.get(&p(&[4])), 1);
    }

    #[test]
    fn rejects_non_characters() {
        let traces = CycleType::all(2).into_iter().map(|t| (t, Scalar::new(1, 2))).collect();
        assert!(decompose(&traces, 2).is_err());
    }
}
