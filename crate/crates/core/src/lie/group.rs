use crate::error::{Error, Result};
use crate::numeric::{c, cnorm, CMat, C64, TWO_PI};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Supported compact connected matrix groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// T^r realized as diagonal matrices in U(r).
    Torus(usize),
    SU(usize),
    U(usize),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Torus(r) => write!(f, "T{r}"),
            GroupKind::SU(n) => write!(f, "SU({n})"),
            GroupKind::U(n) => write!(f, "U({n})"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['(', ')', ' '], "");
        let parse = |digits: &str| -> Result<usize> {
            digits
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("cannot parse group '{s}'")))
        };
        if let Some(rest) = t.strip_prefix("su") {
            Ok(GroupKind::SU(parse(rest)?))
        } else if let Some(rest) = t.strip_prefix("torus") {
            Ok(GroupKind::Torus(parse(rest)?))
        } else if let Some(rest) = t.strip_prefix('u') {
            Ok(GroupKind::U(parse(rest)?))
        } else if let Some(rest) = t.strip_prefix('t') {
            Ok(GroupKind::Torus(parse(rest)?))
        } else if let Some(rest) = t.strip_prefix('s') {
            // "s1" is the circle
            Ok(GroupKind::Torus(parse(rest)?))
        } else {
            Err(Error::Config(format!("unknown group '{s}'")))
        }
    }
}

/// A Weyl group element: a permutation of the diagonal together with its
/// action on Cartan-coalgebra coordinates and its sign.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub matrix: DMatrix<f64>,
    pub sign: f64,
}

/// Root datum and Lie algebra basis of a compact matrix group.
///
/// Lie algebra elements are skew-Hermitian matrices. Coordinates always
/// refer to `basis`, whose first `rank` entries span the Cartan algebra t of
/// diagonal matrices; the rest are the off-diagonal pairs
/// `E_jk - E_kj` and `i(E_jk + E_kj)` for j < k.
///
/// Covectors on the Cartan algebra are written by their values on the first
/// `rank` basis vectors. With these bases the integral lattice is Z^rank.
#[derive(Debug, Clone)]
pub struct CompactGroup {
    pub kind: GroupKind,
    pub dim: usize,
    pub rank: usize,
    /// (dim - rank) / 2, the number of positive roots.
    pub n_g: usize,
    /// Size of the defining matrices.
    pub size: usize,
    pub basis: Vec<CMat>,
    pub positive_roots: Vec<DVector<f64>>,
    /// (j, k) with j < k for the root e_j - e_k.
    pub root_indices: Vec<(usize, usize)>,
    pub delta: DVector<f64>,
    pub weyl_group: Vec<WeylElement>,
    pub integral_lattice: Vec<DVector<f64>>,
    /// Gram matrix of Re tr(A B*) on `basis`.
    pub trace_gram: DMatrix<f64>,
    trace_gram_inv: DMatrix<f64>,
}

fn e_jk(n: usize, j: usize, k: usize, z: C64) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(j, k)] = z;
    m
}

pub(crate) fn re_trace_inner(a: &CMat, b: &CMat) -> f64 {
    // Re tr(A B^*) = Re sum_ij A_ij conj(B_ij)
    a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn perm_sign(p: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Construct the group with its fixed bases and root datum.
pub fn build_group(kind: GroupKind) -> Result<CompactGroup> {
    let i = c(0.0, 1.0);
    let (n, cartan): (usize, Vec<CMat>) = match kind {
        GroupKind::Torus(r) if r >= 1 => (r, (0..r).map(|j| e_jk(r, j, j, i)).collect()),
        GroupKind::U(n) if n >= 1 => (n, (0..n).map(|j| e_jk(n, j, j, i)).collect()),
        GroupKind::SU(n) if n >= 2 => (
            n,
            (0..n - 1)
                .map(|j| e_jk(n, j, j, i) - e_jk(n, j + 1, j + 1, i))
                .collect(),
        ),
        _ => return Err(Error::UnsupportedGroup(format!("{kind} is not supported"))),
    };
    let rank = cartan.len();
    let mut basis = cartan;
    let mut root_indices = Vec::new();
    if !matches!(kind, GroupKind::Torus(_)) {
        for j in 0..n {
            for k in j + 1..n {
                basis.push(e_jk(n, j, k, c(1.0, 0.0)) - e_jk(n, k, j, c(1.0, 0.0)));
                basis.push(e_jk(n, j, k, i) + e_jk(n, k, j, i));
                root_indices.push((j, k));
            }
        }
    }
    let dim = basis.len();
    let n_g = (dim - rank) / 2;
    let trace_gram = DMatrix::from_fn(dim, dim, |a, b| re_trace_inner(&basis[a], &basis[b]));
    let trace_gram_inv = trace_gram
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::UnsupportedGroup("singular basis".into()))?;

    // A root e_j - e_k evaluated on the Cartan basis: theta_j(h) - theta_k(h)
    // where h = diag(i theta).
    let positive_roots: Vec<DVector<f64>> = root_indices
        .iter()
        .map(|&(j, k)| DVector::from_fn(rank, |a, _| basis[a][(j, j)].im - basis[a][(k, k)].im))
        .collect();
    let mut delta = DVector::zeros(rank);
    for b in &positive_roots {
        delta += b * 0.5;
    }

    // Weyl group: permutations of the diagonal (trivial for tori).
    let cartan_gram = trace_gram.view((0, 0), (rank, rank)).into_owned();
    let cartan_gram_inv = cartan_gram.clone().try_inverse().expect("cartan gram");
    let perms = if matches!(kind, GroupKind::Torus(_)) {
        vec![(0..n).collect::<Vec<_>>()]
    } else {
        permutations(n)
    };
    let algebra_matrix = |p: &[usize]| -> DMatrix<f64> {
        // s(h) = P h P^T with P e_j = e_{p[j]}
        DMatrix::from_fn(rank, rank, |row, col| {
            let h = &basis[col];
            let mut moved = CMat::zeros(n, n);
            for j in 0..n {
                moved[(p[j], p[j])] = h[(j, j)];
            }
            let rhs = DVector::from_fn(rank, |a, _| re_trace_inner(&basis[a], &moved));
            (&cartan_gram_inv * rhs)[row]
        })
    };
    let weyl_group = perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; n];
            for (j, &pj) in p.iter().enumerate() {
                inv[pj] = j;
            }
            WeylElement {
                perm: p.clone(),
                matrix: algebra_matrix(&inv).transpose(),
                sign: perm_sign(p),
            }
        })
        .collect();
    let integral_lattice = (0..rank)
        .map(|a| DVector::from_fn(rank, |b, _| if a == b { 1.0 } else { 0.0 }))
        .collect();

    Ok(CompactGroup {
        kind,
        dim,
        rank,
        n_g,
        size: n,
        basis,
        positive_roots,
        root_indices,
        delta,
        weyl_group,
        integral_lattice,
        trace_gram,
        trace_gram_inv,
    })
}

impl CompactGroup {
    pub fn is_torus(&self) -> bool {
        matches!(self.kind, GroupKind::Torus(_))
    }

    /// Expected order of the Weyl group.
    pub fn weyl_order(&self) -> usize {
        match self.kind {
            GroupKind::Torus(_) => 1,
            GroupKind::SU(n) | GroupKind::U(n) => (1..=n).product(),
        }
    }

    pub fn to_matrix(&self, coords: &DVector<f64>) -> CMat {
        assert_eq!(coords.len(), self.dim);
        let mut m = CMat::zeros(self.size, self.size);
        for (a, e) in self.basis.iter().enumerate() {
            if coords[a] != 0.0 {
                m += e * c(coords[a], 0.0);
            }
        }
        m
    }

    /// Coordinates of a matrix in the Lie algebra (its projection, if the
    /// matrix is not in the algebra).
    pub fn coords(&self, m: &CMat) -> DVector<f64> {
        let rhs = DVector::from_fn(self.dim, |a, _| re_trace_inner(&self.basis[a], m));
        &self.trace_gram_inv * rhs
    }

    /// Embed Cartan coordinates into full algebra coordinates.
    pub fn embed_cartan(&self, t: &DVector<f64>) -> DVector<f64> {
        assert_eq!(t.len(), self.rank);
        DVector::from_fn(self.dim, |a, _| if a < self.rank { t[a] } else { 0.0 })
    }

    pub fn bracket(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let (ma, mb) = (self.to_matrix(a), self.to_matrix(b));
        self.coords(&(&ma * &mb - &mb * &ma))
    }

    /// Checks that `g` lies in the group.
    pub fn check_element(&self, g: &CMat) -> Result<()> {
        if g.nrows() != self.size || g.ncols() != self.size {
            return Err(Error::NotInGroup(format!(
                "expected {}x{} matrix, got {}x{}",
                self.size,
                self.size,
                g.nrows(),
                g.ncols()
            )));
        }
        let defect = cnorm(&(g * g.adjoint() - CMat::identity(self.size, self.size)));
        if defect > 1e-10 {
            return Err(Error::NotInGroup(format!("not unitary (defect {defect:e})")));
        }
        match self.kind {
            GroupKind::SU(_) => {
                let det = g.determinant();
                if (det - c(1.0, 0.0)).norm() > 1e-10 {
                    return Err(Error::NotInGroup(format!("determinant {det} is not 1")));
                }
            }
            GroupKind::Torus(_) => {
                let off: f64 = (0..self.size)
                    .flat_map(|j| (0..self.size).map(move |k| (j, k)))
                    .filter(|(j, k)| j != k)
                    .map(|(j, k)| g[(j, k)].norm())
                    .sum();
                if off > 1e-12 {
                    return Err(Error::NotInGroup("torus element must be diagonal".into()));
                }
            }
            GroupKind::U(_) => {}
        }
        Ok(())
    }

    /// Ad_g xi = g xi g^{-1}.
    pub fn adjoint_action(&self, g: &CMat, xi: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_element(g)?;
        Ok(self.coords(&(g * self.to_matrix(xi) * g.adjoint())))
    }

    /// exp of an algebra element.
    pub fn exp(&self, xi: &DVector<f64>) -> CMat {
        self.to_matrix(xi).exp()
    }

    /// Torus element exp(sum_a theta_a h_a).
    pub fn torus_element(&self, theta: &DVector<f64>) -> CMat {
        self.exp(&self.embed_cartan(theta))
    }

    /// Cartan coordinates theta of a diagonal representative of the
    /// conjugacy class of `g`. Defined up to the Weyl group and the
    /// integral lattice of 2 pi, which class functions do not see.
    pub fn class_angles(&self, g: &CMat) -> Result<DVector<f64>> {
        self.check_element(g)?;
        let n = self.size;
        let angles: Vec<f64> = if self.is_torus() {
            (0..n).map(|j| g[(j, j)].arg()).collect()
        } else {
            let ev = nalgebra::linalg::Schur::new(g.clone())
                .eigenvalues()
                .ok_or_else(|| Error::NotInGroup("eigenvalues unavailable".into()))?;
            ev.iter().map(|z| z.arg()).collect()
        };
        match self.kind {
            GroupKind::Torus(_) | GroupKind::U(_) => Ok(DVector::from_vec(angles)),
            GroupKind::SU(_) => {
                // Eigen-angles sum to a multiple of 2 pi; remove it so the
                // diagonal is traceless, then convert to H_j coordinates.
                let mut a = angles;
                let s: f64 = a.iter().sum();
                let m = (s / TWO_PI).round();
                a[n - 1] -= m * TWO_PI;
                let mut theta = DVector::zeros(n - 1);
                let mut acc = 0.0;
                for j in 0..n - 1 {
                    acc += a[j];
                    theta[j] = acc;
                }
                Ok(theta)
            }
        }
    }

    /// A Haar-distributed random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMat {
        let n = self.size;
        if self.is_torus() {
            let mut g = CMat::zeros(n, n);
            for j in 0..n {
                g[(j, j)] = C64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
            }
            return g;
        }
        // QR of a complex Ginibre matrix with the phases of R removed.
        let z = CMat::from_fn(n, n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c(re, im) / 2f64.sqrt()
        });
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..n {
            let d = r[(j, j)];
            let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
            for i in 0..n {
                q[(i, j)] *= ph;
            }
        }
        if let GroupKind::SU(_) = self.kind {
            let det = q.determinant();
            let root = C64::from_polar(1.0, -det.arg() / n as f64);
            q *= root;
        }
        q
    }

    /// Random algebra element with i.i.d. standard normal coordinates.
    pub fn random_algebra<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(self.dim, |_, _| rng.sample(StandardNormal))
    }

    /// Closed-form Riemannian volumes of G and T for the trace form.
    pub fn trace_volumes(&self) -> (f64, f64) {
        let fact_prod = |n: usize| -> f64 { (1..n).map(|k| (1..=k).product::<usize>() as f64).product() };
        match self.kind {
            GroupKind::Torus(r) => (TWO_PI.powi(r as i32), TWO_PI.powi(r as i32)),
            GroupKind::U(n) => (
                TWO_PI.powi((n * (n + 1) / 2) as i32) / fact_prod(n),
                TWO_PI.powi(n as i32),
            ),
            GroupKind::SU(n) => (
                (n as f64).sqrt() * TWO_PI.powi(((n * n + n - 2) / 2) as i32) / fact_prod(n),
                TWO_PI.powi((n - 1) as i32) * (n as f64).sqrt(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_kinds() -> Vec<GroupKind> {
        vec![
            GroupKind::Torus(1),
            GroupKind::Torus(2),
            GroupKind::SU(2),
            GroupKind::SU(3),
            GroupKind::U(1),
            GroupKind::U(2),
            GroupKind::U(3),
        ]
    }

    #[test]
    fn dimensions_match_known_values() {
        let t1 = build_group(GroupKind::Torus(1)).unwrap();
        assert_eq!((t1.dim, t1.rank, t1.n_g), (1, 1, 0));
        assert!(t1.positive_roots.is_empty());
        assert_eq!(t1.delta[0], 0.0);
        let su2 = build_group(GroupKind::SU(2)).unwrap();
        assert_eq!((su2.dim, su2.rank, su2.n_g), (3, 1, 1));
        assert_eq!(su2.positive_roots.len(), 1);
        assert_eq!(su2.delta[0], 1.0);
        let u2 = build_group(GroupKind::U(2)).unwrap();
        assert_eq!((u2.dim, u2.rank, u2.n_g), (4, 2, 1));
        assert_eq!(u2.delta.as_slice(), &[0.5, -0.5]);
        let su3 = build_group(GroupKind::SU(3)).unwrap();
        assert_eq!((su3.dim, su3.rank, su3.n_g), (8, 2, 3));
    }

    #[test]
    fn unsupported_kinds_fail() {
        assert!(build_group(GroupKind::SU(1)).is_err());
        assert!(build_group(GroupKind::Torus(0)).is_err());
        assert!(build_group(GroupKind::U(0)).is_err());
    }

    #[test]
    fn weyl_group_permutes_roots_up_to_sign() {
        for kind in all_kinds() {
            let g = build_group(kind).unwrap();
            assert_eq!(g.weyl_group.len(), g.weyl_order(), "{kind}");
            for w in &g.weyl_group {
                for b in &g.positive_roots {
                    let sb = &w.matrix * b;
                    let hit = g
                        .positive_roots
                        .iter()
                        .any(|c| (&sb - c).norm() < 1e-12 || (&sb + c).norm() < 1e-12);
                    assert!(hit, "{kind}: image {sb} of {b} is not a root");
                }
            }
        }
    }

    #[test]
    fn group_axioms_for_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in all_kinds() {
            let g = build_group(kind).unwrap();
            for _ in 0..10 {
                let h = g.random_element(&mut rng);
                g.check_element(&h).unwrap();
                let xi = g.random_algebra(&mut rng);
                assert!(g.check_element(&g.exp(&xi)).is_ok());
            }
        }
        let su2 = build_group(GroupKind::SU(2)).unwrap();
        assert!(su2.check_element(&(CMat::identity(2, 2) * c(0.0, 1.0))).is_err());
        assert!(su2.check_element(&(CMat::identity(2, 2) * c(2.0, 0.0))).is_err());
    }

    #[test]
    fn class_angles_recover_torus_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [GroupKind::SU(2), GroupKind::U(2), GroupKind::SU(3), GroupKind::Torus(2)] {
            let g = build_group(kind).unwrap();
            for _ in 0..5 {
                let theta = DVector::from_fn(g.rank, |_, _| rng.random_range(-1.0..1.0));
                let h = g.random_element(&mut rng);
                let t = g.torus_element(&theta);
                let conj = if g.is_torus() { t.clone() } else { &h * &t * h.adjoint() };
                let back = g.class_angles(&conj).unwrap();
                // compare through the diagonal eigenvalue multiset
                let ev = |th: &DVector<f64>| {
                    let d = g.torus_element(th);
                    let mut v: Vec<(i64, i64)> = (0..g.size)
                        .map(|j| ((d[(j, j)].re * 1e8).round() as i64, (d[(j, j)].im * 1e8).round() as i64))
                        .collect();
                    v.sort();
                    v
                };
                assert_eq!(ev(&theta), ev(&back), "{kind}");
            }
        }
    }

    #[test]
    fn coords_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in all_kinds() {
            let g = build_group(kind).unwrap();
            let xi = g.random_algebra(&mut rng);
            assert!((g.coords(&g.to_matrix(&xi)) - &xi).norm() < 1e-13);
        }
    }

    #[test]
    fn group_kind_parsing() {
        assert_eq!("SU(2)".parse::<GroupKind>().unwrap(), GroupKind::SU(2));
        assert_eq!("u2".parse::<GroupKind>().unwrap(), GroupKind::U(2));
        assert_eq!("t2".parse::<GroupKind>().unwrap(), GroupKind::Torus(2));
        assert_eq!("torus(3)".parse::<GroupKind>().unwrap(), GroupKind::Torus(3));
        assert_eq!("s1".parse::<GroupKind>().unwrap(), GroupKind::Torus(1));
        assert!("sp4".parse::<GroupKind>().is_err());
    }
}
