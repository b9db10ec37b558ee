//! Tiny fixed-size helpers for 3x3 matrices.

pub type M3 = [[f64; 3]; 3];

pub const ID: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn det3(a: &M3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn inv3(a: &M3) -> M3 {
    let d = det3(a);
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]
    };
    // inverse = adj / det, adj_ij = cofactor_ji
    std::array::from_fn(|i| std::array::from_fn(|j| c(j, i) / d))
}

pub fn mul(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose(a: &M3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn matvec(a: &M3, v: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2])
}

pub fn sym_to_m3(s: &[f64; 6]) -> M3 {
    [[s[0], s[1], s[2]], [s[1], s[3], s[4]], [s[2], s[4], s[5]]]
}

pub fn m3_to_sym(a: &M3) -> [f64; 6] {
    [a[0][0], 0.5 * (a[0][1] + a[1][0]), 0.5 * (a[0][2] + a[2][0]), a[1][1], 0.5 * (a[1][2] + a[2][1]), a[2][2]]
}

/// Frobenius distance of a symmetric matrix from the identity.
pub fn frob_dist_id(s: &[f64; 6]) -> f64 {
    let d = [s[0] - 1.0, s[3] - 1.0, s[5] - 1.0];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + 2.0 * (s[1] * s[1] + s[2] * s[2] + s[4] * s[4])).sqrt()
}

pub fn max_abs(a: &M3) -> f64 {
    a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}
