//! Small dense linear algebra over an arbitrary field.

use super::field::Field;

pub type Mat3<F> = [[<F as Field>::Elem; 3]; 3];
pub type Vec3<F> = [<F as Field>::Elem; 3];

pub fn det3<F: Field>(k: &F, m: &Mat3<F>) -> F::Elem {
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        k.sub(&k.mul(&m[1][a], &m[2][b]), &k.mul(&m[1][c], &m[2][d]))
    };
    let t0 = k.mul(&m[0][0], &minor(1, 2, 2, 1));
    let t1 = k.mul(&m[0][1], &minor(0, 2, 2, 0));
    let t2 = k.mul(&m[0][2], &minor(0, 1, 1, 0));
    k.add(&k.sub(&t0, &t1), &t2)
}

/// Determinant of three row vectors.
pub fn det_rows<F: Field>(k: &F, a: &Vec3<F>, b: &Vec3<F>, c: &Vec3<F>) -> F::Elem {
    det3(k, &[a.clone(), b.clone(), c.clone()])
}

pub fn inv3<F: Field>(k: &F, m: &Mat3<F>) -> Option<Mat3<F>> {
    let d = k.inv(&det3(k, m))?;
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let v = k.sub(
            &k.mul(&m[rs[0]][cs[0]], &m[rs[1]][cs[1]]),
            &k.mul(&m[rs[0]][cs[1]], &m[rs[1]][cs[0]]),
        );
        if (r + c) % 2 == 1 {
            k.neg(&v)
        } else {
            v
        }
    };
    // inverse = adjugate / det, adjugate is the transposed cofactor matrix
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| k.mul(&cof(j, i), &d))
    }))
}

pub fn mul3<F: Field>(k: &F, a: &Mat3<F>, b: &Mat3<F>) -> Mat3<F> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&a[i][t], &b[t][j])))
        })
    })
}

pub fn apply3<F: Field>(k: &F, a: &Mat3<F>, v: &Vec3<F>) -> Vec3<F> {
    std::array::from_fn(|i| {
        (0..3).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&a[i][t], &v[t])))
    })
}

/// Scales so the first nonzero entry (row-major) is 1.
pub fn normalize_mat3<F: Field>(k: &F, m: &Mat3<F>) -> Mat3<F> {
    let lead = m.iter().flatten().find(|x| !k.is_zero(x)).cloned();
    match lead.and_then(|l| k.inv(&l)) {
        Some(s) => std::array::from_fn(|i| std::array::from_fn(|j| k.mul(&m[i][j], &s))),
        None => m.clone(),
    }
}

/// Projective normalization: the first nonzero coordinate becomes 1.
pub fn normalize_point<F: Field>(k: &F, v: &Vec3<F>) -> Vec3<F> {
    let lead = v.iter().find(|x| !k.is_zero(x)).cloned();
    match lead.and_then(|l| k.inv(&l)) {
        Some(s) => std::array::from_fn(|i| k.mul(&v[i], &s)),
        None => v.clone(),
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(k: &F, m: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let s = k.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = k.mul(x, &s);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = k.mul(&f, &m[r][j]);
                    m[i][j] = k.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut m = m.to_vec();
    rref(k, &mut m).len()
}

/// Basis of the right kernel, one vector per free column, with a 1 in that column.
pub fn nullspace<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let mut m = m.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let pivots = rref(k, &mut m);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![k.zero(); cols];
        v[free] = k.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = k.neg(&m[r][free]);
        }
        out.push(v);
    }
    out
}
