use num::BigUint;
use num::One;

pub(crate) fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

#[cfg(test)]
pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    // Row-by-row product keeps intermediate divisions exact.
    let mut acc = BigUint::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// All tuples in {1, …, bound}^len in lexicographic order.
pub(crate) fn index_tuples(bound: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![1usize; len];
    if bound == 0 && len > 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        // Odometer increment from the last position.
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < bound {
                cur[pos] += 1;
                for slot in cur.iter_mut().skip(pos + 1) {
                    *slot = 1;
                }
                break;
            }
        }
    }
}
