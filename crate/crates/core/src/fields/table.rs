use smallvec::SmallVec;

use super::{ExtElement, Field, PrimeField, SimpleExtension};

/// A finite field `F_q` with table-driven arithmetic.
///
/// Elements are `u32` codes: the element `sum c_i x^i` of the underlying
/// `F_p[x]/(m)` has code `sum c_i p^i`. Multiplication uses discrete
/// logarithms to a primitive element.
#[derive(Debug, Clone)]
pub struct TableField {
    p: u32,
    degree: usize,
    q: u32,
    log: Vec<u32>,
    exp: Vec<u32>,
    negs: Vec<u32>,
    add_table: Option<Vec<u32>>,
    ext: SimpleExtension<PrimeField>,
}

const ADD_TABLE_LIMIT: u32 = 1024;

impl TableField {
    /// Builds the tables for `F_p[x]/(m)`. Intended for fields with at most a
    /// few million elements.
    pub fn new(ext: &SimpleExtension<PrimeField>) -> Self {
        let p = ext.base().p();
        let degree = ext.degree();
        let q = (p as u64).pow(degree as u32);
        assert!(q < (1 << 26), "table field too large");
        let q = q as u32;
        let decode = |code: u32| -> ExtElement<u32> {
            let mut c = code;
            let v: SmallVec<[u32; 4]> = (0..degree)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            ExtElement(v)
        };
        let encode = |a: &ExtElement<u32>| -> u32 {
            a.0.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };
        // search for a primitive element
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        for cand in 1..q {
            let g = decode(cand);
            exp.clear();
            let mut cur = ext.one();
            let mut ok = true;
            for i in 0..q - 1 {
                let code = encode(&cur);
                if i > 0 && code == 1 {
                    ok = false;
                    break;
                }
                exp.push(code);
                cur = ext.mul(&cur, &g);
            }
            if ok {
                break;
            }
        }
        for (i, &c) in exp.iter().enumerate() {
            log[c as usize] = i as u32;
        }
        let negs = (0..q)
            .map(|c| encode(&ext.neg(&decode(c))))
            .collect();
        let mut tf = TableField {
            p,
            degree,
            q,
            log,
            exp,
            negs,
            add_table: None,
            ext: ext.clone(),
        };
        if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = tf.add_digits(a, b);
                }
            }
            tf.add_table = Some(t);
        }
        tf
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic_p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn extension(&self) -> &SimpleExtension<PrimeField> {
        &self.ext
    }

    pub fn encode(&self, a: &ExtElement<u32>) -> u32 {
        a.0.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, code: u32) -> ExtElement<u32> {
        let mut c = code;
        ExtElement(
            (0..self.degree)
                .map(|_| {
                    let d = c % self.p;
                    c /= self.p;
                    d
                })
                .collect(),
        )
    }

    /// `a^(p^j)`.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let mut e = 1u64;
        for _ in 0..j {
            e = e * self.p as u64 % n;
        }
        self.exp[(self.log[a as usize] as u64 * e % n) as usize]
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }
}

impl Field for TableField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(*a * self.q + *b) as usize],
            None => self.add_digits(*a, *b),
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.negs[*b as usize])
    }
    fn neg(&self, a: &u32) -> u32 {
        self.negs[*a as usize]
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let s = self.log[*a as usize] + self.log[*b as usize];
        let n = self.q - 1;
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[*a as usize]) % n) as usize])
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn format(&self, a: &u32) -> String {
        self.ext.format(&self.decode(*a))
    }
    fn is_compound(&self, a: &u32) -> bool {
        *a >= self.p
    }
}
