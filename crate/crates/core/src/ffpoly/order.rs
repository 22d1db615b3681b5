use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError};

/// Monomial orders used by the Gröbner engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    /// Product order: degrevlex on variables `0..k`, ties broken by degrevlex
    /// on `k..n`. Every monomial touching a variable of index `< k` is larger
    /// than every monomial in the remaining variables alone.
    Block(usize),
}

#[inline]
fn revlex_tail(a: &[u8], b: &[u8]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[inline]
fn degrevlex(a: &[u8], b: &[u8]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| revlex_tail(a, b))
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| revlex_tail(a.exponents(), b.exponents())),
            MonomialOrder::Lex => a.exponents().cmp(b.exponents()),
            MonomialOrder::Block(k) => {
                let (a1, a2) = a.exponents().split_at(k);
                let (b1, b2) = b.exponents().split_at(k);
                degrevlex(a1, b1).then_with(|| degrevlex(a2, b2))
            }
        }
    }

    /// Whether the order compares total degree first.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::DegRevLex => "degrevlex".to_string(),
            MonomialOrder::Lex => "lex".to_string(),
            MonomialOrder::Block(k) => format!("block({k})"),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for MonomialOrder {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        match s {
            "degrevlex" | "dp" => return Ok(MonomialOrder::DegRevLex),
            "lex" | "lp" => return Ok(MonomialOrder::Lex),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("block(").and_then(|r| r.strip_suffix(')')) {
            if let Ok(k) = inner.trim().parse() {
                return Ok(MonomialOrder::Block(k));
            }
        }
        Err(PolyError::Parse(format!("unknown monomial order `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_textbook_cases() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > xz > yz > z^2 in degree two
        let seq = [
            mono(&[2, 0, 0]),
            mono(&[1, 1, 0]),
            mono(&[0, 2, 0]),
            mono(&[1, 0, 1]),
            mono(&[0, 1, 1]),
            mono(&[0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        assert_eq!(o.cmp(&mono(&[0, 0, 3]), &mono(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_and_block_elimination() {
        let lex = MonomialOrder::Lex;
        assert_eq!(lex.cmp(&mono(&[1, 0, 0]), &mono(&[0, 5, 5])), Ordering::Greater);
        let blk = MonomialOrder::Block(1);
        assert_eq!(blk.cmp(&mono(&[1, 0, 0]), &mono(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(blk.cmp(&mono(&[0, 2, 0]), &mono(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn parses_names() {
        for o in [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Block(3)] {
            assert_eq!(o.name().parse::<MonomialOrder>().unwrap(), o);
        }
        assert!("grevlex2".parse::<MonomialOrder>().is_err());
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..4, 5).prop_map(|v| Monomial::from_exponents(&v))
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::DegRevLex),
            Just(MonomialOrder::Lex),
            (0usize..=5).prop_map(MonomialOrder::Block),
        ]
    }

    proptest! {
        #[test]
        fn order_laws(o in arb_order(), a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            // totality and antisymmetry
            let ab = o.cmp(&a, &b);
            prop_assert_eq!(ab, o.cmp(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            // transitivity
            if ab != Ordering::Less && o.cmp(&b, &c) != Ordering::Less {
                prop_assert_ne!(o.cmp(&a, &c), Ordering::Less);
            }
            // multiplicativity
            prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ab);
            // 1 is minimal
            prop_assert_ne!(o.cmp(&a, &Monomial::one(5)), Ordering::Less);
        }

        #[test]
        fn block_order_eliminates(k in 1usize..5, a in arb_mono(), b in arb_mono()) {
            let o = MonomialOrder::Block(k);
            let touches = a.exponents()[..k].iter().any(|&e| e > 0);
            let avoids = b.exponents()[..k].iter().all(|&e| e == 0);
            if touches && avoids {
                prop_assert_eq!(o.cmp(&a, &b), Ordering::Greater);
            }
        }
    }
}
