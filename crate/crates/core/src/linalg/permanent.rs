use num_complex::Complex64;

use super::{ComplexMatrix, C0};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`permanent`].
pub const PERMANENT_CAP: usize = 14;

/// Matrix permanent by Ryser's formula, visiting subsets in Gray-code order.
///
/// The summation order is fixed, so results are bit-for-bit reproducible.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n > PERMANENT_CAP {
        return Err(Error::PermanentTooLarge { n, cap: PERMANENT_CAP });
    }
    if n == 1 {
        return Ok(m[(0, 0)]);
    }

    let mut row_sums = vec![C0; n];
    let mut total = C0;
    let mut gray: u32 = 0;
    for k in 1u32..(1 << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m[(i, col)];
            } else {
                *s -= m[(i, col)];
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if next.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    Ok(if n % 2 == 1 { -total } else { total })
}
