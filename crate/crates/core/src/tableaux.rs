//! Semistandard Young tableaux, their weight matrix, and Schur polynomial
//! evaluation.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

/// Partition `lambda = r - delta`, stored non-decreasing
/// (`lambda_1 <= ... <= lambda_M`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Shape {
    lambda: Vec<u32>,
}

impl Shape {
    /// From strictly increasing non-negative positions.
    pub fn from_positions(r: &[i64]) -> Self {
        let lambda = r.iter().enumerate().map(|(i, &x)| (x - i as i64) as u32).collect();
        Shape { lambda }
    }

    pub fn new(mut lambda: Vec<u32>) -> Self {
        lambda.sort();
        Shape { lambda }
    }

    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    pub fn num_rows(&self) -> usize {
        self.lambda.len()
    }

    /// Row lengths from the top row down.
    pub fn row_lengths(&self) -> Vec<usize> {
        self.lambda.iter().rev().map(|&x| x as usize).collect()
    }

    pub fn boxes(&self) -> usize {
        self.lambda.iter().map(|&x| x as usize).sum()
    }
}

/// Rows from the top, entries in `1..=M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tableau {
    pub rows: Vec<Vec<u8>>,
}

impl Tableau {
    /// Multiplicity of each entry `1..=m`.
    pub fn weight(&self, m: usize) -> Vec<u32> {
        let mut w = vec![0u32; m];
        for row in &self.rows {
            for &x in row {
                w[x as usize - 1] += 1;
            }
        }
        w
    }

    pub fn is_semistandard(&self, m: usize) -> bool {
        let rows_ok = self.rows.iter().all(|r| {
            r.iter().all(|&x| x >= 1 && x as usize <= m) && r.windows(2).all(|w| w[0] <= w[1])
        });
        let cols_ok = self.rows.windows(2).all(|pair| {
            pair[1].len() <= pair[0].len()
                && pair[1].iter().zip(&pair[0]).all(|(below, above)| below > above)
        });
        rows_ok && cols_ok
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// All SSYT of the shape with entries in `1..=m`, in lexicographic order of
/// the row-major reading word.
pub fn enumerate_ssyt(shape: &Shape, m: usize) -> Vec<Tableau> {
    let lens = shape.row_lengths();
    let cells: Vec<(usize, usize)> =
        lens.iter().enumerate().flat_map(|(i, &l)| (0..l).map(move |j| (i, j))).collect();
    let col_height = |j: usize| lens.iter().filter(|&&l| l > j).count();
    let caps: Vec<u8> = cells.iter().map(|&(i, j)| (m - (col_height(j) - 1 - i)) as u8).collect();
    let mut rows: Vec<Vec<u8>> = lens.iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();
    fill(0, &cells, &caps, &mut rows, &mut out);
    out
}

fn fill(k: usize, cells: &[(usize, usize)], caps: &[u8], rows: &mut Vec<Vec<u8>>, out: &mut Vec<Tableau>) {
    if k == cells.len() {
        out.push(Tableau { rows: rows.clone() });
        return;
    }
    let (i, j) = cells[k];
    let left = if j > 0 { rows[i][j - 1] } else { 1 };
    let above = if i > 0 { rows[i - 1][j] + 1 } else { 1 };
    for v in left.max(above)..=caps[k] {
        rows[i][j] = v;
        fill(k + 1, cells, caps, rows, out);
    }
    rows[i][j] = 0;
}

/// Number of SSYT via the product formula `prod_{i<j} (r_j - r_i) / (j - i)`.
pub fn ssyt_count_formula(r: &[i64]) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 0..r.len() {
        for i in 0..j {
            num *= (r[j] - r[i]) as u128;
            den *= (j - i) as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    num / den
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `M x N` weight matrix; column `l` is the content of tableau `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightMatrix {
    m: usize,
    cols: Vec<Vec<u32>>,
}

impl WeightMatrix {
    pub fn from_tableaux(tableaux: &[Tableau], m: usize) -> Self {
        WeightMatrix { m, cols: tableaux.iter().map(|t| t.weight(m)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, m: usize, l: usize) -> u32 {
        self.cols[l][m]
    }

    pub fn column(&self, l: usize) -> &[u32] {
        &self.cols[l]
    }

    /// True when every column is a unit vector, i.e. each monomial is a
    /// single `z_m`.
    pub fn is_permutation_like(&self) -> bool {
        self.cols.iter().all(|c| c.iter().sum::<u32>() == 1)
    }

    /// `s_lambda(z) = sum_l prod_m z_m^{alpha_{m l}}`.
    pub fn schur_eval(&self, z: &[Complex64]) -> Complex64 {
        self.cols
            .iter()
            .map(|c| c.iter().zip(z).map(|(&a, zi)| zi.powu(a)).product::<Complex64>())
            .sum()
    }

    /// Column permutation `gamma` with `alpha[m][gamma(l)] = alpha[tau^-1(m)][l]`,
    /// where `tau` is given as the image list `tau[m]`. Equal columns are
    /// matched in order.
    pub fn permute_weight_rows(&self, tau: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; tau.len()];
        for (m, &t) in tau.iter().enumerate() {
            inv[t] = m;
        }
        let mut taken = vec![false; self.cols.len()];
        self.cols
            .iter()
            .map(|c| {
                let target: Vec<u32> = (0..self.m).map(|m| c[inv[m]]).collect();
                let g = (0..self.cols.len())
                    .find(|&g| !taken[g] && self.cols[g] == target)
                    .expect("row permutation maps weights onto weights");
                taken[g] = true;
                g
            })
            .collect()
    }
}
