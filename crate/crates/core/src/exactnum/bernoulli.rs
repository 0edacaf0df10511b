use super::{rat_int, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

/// `B_0 .. B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(rat_int(1));
    // binomial row C(m+1, j)
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::zero());
            continue;
        }
        let mut row = vec![BigInt::from(1)];
        for j in 1..=m + 1 {
            let prev = row[j - 1].clone();
            row.push(prev * BigInt::from(m + 2 - j) / BigInt::from(j));
        }
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += bj * Rational::from_integer(row[j].clone());
        }
        b.push(-s / Rational::from_integer(row[m].clone()));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().unwrap()
}
