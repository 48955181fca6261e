//! Conway polynomials for p in {2, 3, 5, 7} and degree at most 10.
//!
//! Coefficients are listed from the constant term up; the leading 1 is included.

#[rustfmt::skip]
const P2: [&[u32]; 10] = [
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 0, 1],
    &[1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 1, 1, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 1, 0, 0, 0, 1],
    &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1],
];

#[rustfmt::skip]
const P3: [&[u32]; 10] = [
    &[1, 1],
    &[2, 2, 1],
    &[1, 2, 0, 1],
    &[2, 0, 0, 2, 1],
    &[1, 2, 0, 0, 0, 1],
    &[2, 2, 1, 0, 2, 0, 1],
    &[1, 0, 2, 0, 0, 0, 0, 1],
    &[2, 2, 2, 0, 1, 2, 0, 0, 1],
    &[1, 1, 2, 2, 0, 0, 0, 0, 0, 1],
    &[2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1],
];

#[rustfmt::skip]
const P5: [&[u32]; 10] = [
    &[3, 1],
    &[2, 4, 1],
    &[3, 3, 0, 1],
    &[2, 4, 4, 0, 1],
    &[3, 4, 0, 0, 0, 1],
    &[2, 0, 1, 4, 1, 0, 1],
    &[3, 3, 0, 0, 0, 0, 0, 1],
    &[2, 4, 3, 0, 1, 0, 0, 0, 1],
    &[3, 1, 0, 2, 0, 0, 0, 0, 0, 1],
    &[2, 1, 4, 2, 3, 3, 0, 0, 0, 0, 1],
];

#[rustfmt::skip]
const P7: [&[u32]; 10] = [
    &[4, 1],
    &[3, 6, 1],
    &[4, 0, 6, 1],
    &[3, 4, 5, 0, 1],
    &[4, 1, 0, 0, 0, 1],
    &[3, 6, 4, 5, 1, 0, 1],
    &[4, 6, 0, 0, 0, 0, 0, 1],
    &[3, 2, 6, 4, 0, 0, 0, 0, 1],
    &[4, 6, 0, 1, 6, 0, 0, 0, 0, 1],
    &[3, 3, 2, 1, 4, 1, 1, 0, 0, 0, 1],
];

pub fn conway_polynomial(p: u32, m: u32) -> Option<&'static [u32]> {
    if m == 0 || m > 10 {
        return None;
    }
    let table = match p {
        2 => &P2,
        3 => &P3,
        5 => &P5,
        7 => &P7,
        _ => return None,
    };
    Some(table[(m - 1) as usize])
}
