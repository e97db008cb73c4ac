use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A partition of `n`: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidTableau(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn row(n: usize) -> Self {
        Partition(vec![n])
    }

    /// The hook `(n − r + 1, 1^{r−1})` with `r` rows.
    pub fn hook(n: usize, r: usize) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::InvalidTableau(format!("no hook of {n} with {r} rows")));
        }
        let mut parts = vec![n - r + 1];
        parts.extend(std::iter::repeat(1).take(r - 1));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    /// Number of rows when the partition is a hook.
    pub fn hook_rows(&self) -> Option<usize> {
        self.0[1..].iter().all(|&p| p == 1).then_some(self.0.len())
    }

    pub fn conjugate(&self) -> Partition {
        Partition((1..=self.0[0]).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect())
    }

    /// All partitions of `n`, starting with `(n)` and ending with `(1^n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Number of standard tableaux (hook length formula).
    pub fn dimension(&self) -> u64 {
        let conj = self.conjugate();
        let mut denom = BigUint::from(1u32);
        for (i, &row) in self.0.iter().enumerate() {
            for (j, &col) in conj.0.iter().enumerate().take(row) {
                let hook = (row - j) + (col - i) - 1;
                denom *= hook as u64;
            }
        }
        let fact: BigUint = (1..=self.n() as u64).product();
        let f = fact / denom;
        u64::try_from(f).expect("dimension fits in u64")
    }
}

impl Ord for Partition {
    /// By size, then reverse lexicographic on the parts, so `(n)` comes first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n().cmp(&other.n()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    /// `(a,b,c)`, with a trailing run of at least two 1s written `1^r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones = self.0.iter().rev().take_while(|&&p| p == 1).count();
        let (head, tail) = if ones >= 2 {
            (&self.0[..self.0.len() - ones], Some(ones))
        } else {
            (&self.0[..], None)
        };
        let mut items: Vec<String> = head.iter().map(|p| p.to_string()).collect();
        if let Some(r) = tail {
            items.push(format!("1^{r}"));
        }
        write!(f, "({})", items.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `(3,1,1)`, `(3,1^2)` or `3,1,1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTableau(format!("cannot read partition {s:?}"));
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for item in inner.split(',') {
            let item = item.trim();
            match item.split_once('^') {
                Some((base, exp)) => {
                    let b: usize = base.trim().parse().map_err(|_| bad())?;
                    let e: usize = exp.trim().parse().map_err(|_| bad())?;
                    parts.extend(std::iter::repeat(b).take(e));
                }
                None => parts.push(item.parse().map_err(|_| bad())?),
            }
        }
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A conjugacy class of `S_n`, given by its cycle lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycleType(pub Partition);

impl CycleType {
    pub fn all(n: usize) -> Vec<CycleType> {
        Partition::all(n).into_iter().map(CycleType).collect()
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    /// `n! / Π_i (i^{k_i} k_i!)` where `k_i` counts cycles of length `i`.
    pub fn class_size(&self) -> u64 {
        let n = self.0.n();
        let mut denom = BigUint::from(1u32);
        let mut counts = std::collections::BTreeMap::new();
        for &p in self.0.parts() {
            *counts.entry(p).or_insert(0u64) += 1;
            denom *= p as u64;
        }
        for k in counts.values() {
            denom *= (1..=*k).product::<BigUint>();
        }
        let fact: BigUint = (1..=n as u64).product();
        u64::try_from(fact / denom).expect("class size fits in u64")
    }

    /// A permutation of this type whose cycles run over consecutive points.
    pub fn representative(&self) -> Vec<usize> {
        let mut sigma = Vec::with_capacity(self.0.n());
        let mut start = 0;
        for &len in self.0.parts() {
            for k in 0..len {
                sigma.push(start + (k + 1) % len);
            }
            start += len;
        }
        sigma
    }

    /// `±1` by the parity of the permutation.
    pub fn sign(&self) -> i64 {
        let even_cycles = self.0.parts().iter().filter(|&&p| p % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let p = Partition::new(vec![3, 1, 1]).unwrap();
        assert_eq!(p.to_string(), "(3,1^2)");
        assert_eq!("(3,1^2)".parse::<Partition>().unwrap(), p);
        assert_eq!("(2,1)".parse::<Partition>().unwrap().to_string(), "(2,1)");
        assert_eq!(Partition::hook(4, 4).unwrap().to_string(), "(1^4)");
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(Partition::all(5).len(), 7);
        assert_eq!(Partition::all(5)[0], Partition::row(5));
        let total: u64 = CycleType::all(6).iter().map(CycleType::class_size).sum();
        assert_eq!(total, 720);
        assert_eq!(Partition::new(vec![2, 1]).unwrap().dimension(), 2);
        assert_eq!(Partition::new(vec![3, 2]).unwrap().dimension(), 5);
    }

    #[test]
    fn representative_has_its_type() {
        let c = CycleType(Partition::new(vec![3, 2]).unwrap());
        assert_eq!(c.representative(), vec![1, 2, 0, 4, 3]);
        assert_eq!(c.sign(), -1);
    }
}
