//! Dense integer polynomial helpers, coefficients stored from the constant
//! term upward. Used where degree is small and exact division or gcd is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Dense = Vec<BigInt>;

pub fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &[BigInt]) -> Dense {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Exact quotient `a / b` over the integers, or `None` when `b` does not
/// divide `a` in `Z[z]`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Dense> {
    let db = degree(b)?;
    let Some(da) = degree(a) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    let lead = &b[db];
    let mut rem: Dense = a[..=da].to_vec();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let top = &rem[i + db];
        if top.is_zero() {
            continue;
        }
        let (qi, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b[..=db].iter().enumerate() {
            if !bj.is_zero() {
                rem[i + j] -= &qi * bj;
            }
        }
        q[i] = qi;
    }
    if rem.iter().all(|c| c.is_zero()) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

pub fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(p: &[BigInt]) -> Dense {
    let mut out: Dense = p.to_vec();
    trim(&mut out);
    let c = content(&out);
    if c.is_zero() {
        return out;
    }
    let sign = if out.last().is_some_and(|l| l.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let c = c * sign;
    for x in out.iter_mut() {
        *x = &*x / &c;
    }
    out
}

/// Pseudo-remainder of `a` by `b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Dense {
    let db = degree(b).expect("nonzero divisor");
    let lead = b[db].clone();
    let mut r: Dense = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let top = r[dr].clone();
        for x in r.iter_mut() {
            *x *= &lead;
        }
        for (j, bj) in b[..=db].iter().enumerate() {
            r[dr - db + j] -= &top * bj;
        }
        trim(&mut r);
        // keep coefficient growth in check
        let c = content(&r);
        if !c.is_zero() && !c.is_one() {
            for x in r.iter_mut() {
                *x = &*x / &c;
            }
        }
    }
    r
}

/// Primitive gcd in `Z[z]` via the primitive remainder sequence, normalised
/// to positive leading coefficient.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Dense {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if degree(&x).is_none() {
        return y;
    }
    if degree(&y).is_none() {
        return x;
    }
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        let r = pseudo_rem(&x, &y);
        if degree(&r).is_none() {
            return primitive(&y);
        }
        if degree(&r) == Some(0) {
            return vec![BigInt::one()];
        }
        x = y;
        y = primitive(&r);
    }
}
