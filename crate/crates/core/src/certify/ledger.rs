use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::hhs::Constants;

mod big_str {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum K3Source {
    Declared,
    Empirical,
    Default,
}

/// The integer constants bounding certified word lengths. Large values are
/// exact and serialize as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub kappa0: f64,
    pub tau0: f64,
    pub delta: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "big_str")]
    pub k1: BigUint,
    #[serde(with = "big_str")]
    pub n0: BigUint,
    #[serde(with = "big_str")]
    pub k2: BigUint,
    #[serde(with = "big_str")]
    pub k3: BigUint,
    pub k3_source: K3Source,
    #[serde(with = "big_str")]
    pub k4: BigUint,
    #[serde(rename = "M", with = "big_str")]
    pub m: BigUint,
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `max(1, ⌈x⌉)`, with a small tolerance against float noise.
fn ceil_pos(x: f64) -> BigUint {
    let c = (x - 1e-9).ceil().max(1.0);
    BigUint::from(c as u64)
}

impl ConstantLedger {
    /// `k3` is the declared value, else the supplied empirical value, else 1.
    pub fn new(c: &Constants, n: usize, empirical_k3: Option<u64>) -> Self {
        let d = c.d();
        let ratio = ceil_pos(2.0 * c.kappa0 / c.tau0);
        let k1 = &ratio * factorial(2 * n as u64 + 1);
        let n0 = ceil_pos(10.0 * d / c.tau0);
        let n0_small = n0.to_u64().expect("n0 fits in u64");
        let k2 = &ratio * factorial(2 * n0_small + 1);
        let (k3, k3_source) = match (c.k3, empirical_k3) {
            (Some(k), _) => (BigUint::from(k), K3Source::Declared),
            (None, Some(k)) => (BigUint::from(k), K3Source::Empirical),
            (None, None) => (BigUint::one(), K3Source::Default),
        };
        let k4 = ceil_pos(10000.0 * c.delta / c.tau0);
        let two = BigUint::from(2u32);
        let m = [
            k1.clone(),
            &two * &n0 + &k2,
            &k3 + &two,
            BigUint::from(3u32) * (&k4 + &two) * factorial(n as u64 + 1),
        ]
        .into_iter()
        .max()
        .expect("nonempty");
        ConstantLedger {
            kappa0: c.kappa0,
            tau0: c.tau0,
            delta: c.delta,
            d,
            n,
            k1,
            n0,
            k2,
            k3,
            k3_source,
            k4,
            m,
        }
    }

    /// `⌈2κ₀/τ₀⌉`, the factor in front of the stabilizing factorials.
    pub fn pingpong_ratio(&self) -> u64 {
        ceil_pos(2.0 * self.kappa0 / self.tau0)
            .to_u64()
            .expect("small")
    }

    pub fn k4_u64(&self) -> Option<u64> {
        self.k4.to_u64()
    }

    pub fn n0_u64(&self) -> u64 {
        self.n0.to_u64().expect("n0 fits in u64")
    }
}
