//! Parametric pieces of a Levy measure and their flattened representation.
//!
//! Every density component flattens into [`Piece`]s: a coefficient times a
//! kernel of |x| on an interval lo < |x| < hi on one side of the origin.
//! All measure algebra (restriction, reflection, same-family subtraction)
//! is done on pieces and converted back into components afterwards.

use crate::error::{HuntError, Result};
use crate::special::{e1, ei};

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub x: Vec<f64>,
    pub w: f64,
}

impl Atom {
    pub fn new(x: Vec<f64>, w: f64) -> Self {
        Self { x, w }
    }
    pub fn scalar(x: f64, w: f64) -> Self {
        Self { x: vec![x], w }
    }
    pub fn norm(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// One term `scale * x^{-1-index}` of a subordinator jump density on (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub scale: f64,
    pub index: f64,
}

/// Jump density of a pure-jump subordinator, bracketed as type-(alpha, beta).
#[derive(Debug, Clone, PartialEq)]
pub struct TypeAlphaBetaDensity {
    pub terms: Vec<PowerTerm>,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

impl TypeAlphaBetaDensity {
    pub fn rho(&self, x: f64) -> f64 {
        if !(0.0 < x && x <= 1.0) {
            return 0.0;
        }
        self.terms.iter().map(|t| t.scale * x.powf(-1.0 - t.index)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevyComponent {
    /// c_plus x^{-1-alpha} on (0, cutoff) and c_minus |x|^{-1-alpha} on (-cutoff, 0).
    /// `cutoff` may be infinite.
    StablePower { alpha: f64, c_plus: f64, c_minus: f64, cutoff: f64 },
    /// c / (x^2 |log x|) on (0, delta).
    LogSingular { c: f64, delta: f64 },
    Atoms(Vec<Atom>),
    /// `scale` times `inner` restricted to lo <= x < hi (signed, 1-D).
    Restricted { inner: Box<LevyComponent>, scale: f64, lo: f64, hi: f64 },
    /// Image of `inner` under x -> -x.
    Reflected(Box<LevyComponent>),
    TypeAlphaBeta(TypeAlphaBetaDensity),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Pos,
    Neg,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Pos => Side::Neg,
            Side::Neg => Side::Pos,
        }
    }
    pub fn sign(self) -> f64 {
        match self {
            Side::Pos => 1.0,
            Side::Neg => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// x^{-1-alpha}
    Power(f64),
    /// 1 / (x^2 |log x|), only for x < 1
    LogSingular,
}

impl Kernel {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Kernel::Power(alpha) => x.powf(-1.0 - alpha),
            Kernel::LogSingular => 1.0 / (x * x * x.ln().abs()),
        }
    }

    pub fn same_family(&self, other: &Kernel) -> bool {
        match (self, other) {
            (Kernel::Power(a), Kernel::Power(b)) => (a - b).abs() <= 1e-14,
            (Kernel::LogSingular, Kernel::LogSingular) => true,
            _ => false,
        }
    }

    /// Blumenthal-Getoor-type index at the origin: inf{p: int_0 x^p k < inf}.
    pub fn activity_index(&self) -> f64 {
        match *self {
            Kernel::Power(alpha) => alpha,
            Kernel::LogSingular => 1.0,
        }
    }

    /// Growth order of the kernel at 0 as (power, log power): k ~ x^{-power} |log x|^{log_power}.
    pub fn singularity(&self) -> (f64, f64) {
        match *self {
            Kernel::Power(alpha) => (1.0 + alpha, 0.0),
            Kernel::LogSingular => (2.0, -1.0),
        }
    }

    /// int_a^b x^p k(x) dx, possibly infinite. Requires 0 <= a < b.
    pub fn moment(&self, p: f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match *self {
            Kernel::Power(alpha) => {
                let s = p - alpha;
                if s == 0.0 {
                    if a == 0.0 || b.is_infinite() {
                        f64::INFINITY
                    } else {
                        (b / a).ln()
                    }
                } else if s > 0.0 {
                    if b.is_infinite() {
                        f64::INFINITY
                    } else {
                        (b.powf(s) - a.powf(s)) / s
                    }
                } else if a == 0.0 {
                    f64::INFINITY
                } else {
                    let bs = if b.is_infinite() { 0.0 } else { b.powf(s) };
                    (bs - a.powf(s)) / s
                }
            }
            Kernel::LogSingular => {
                // x = e^{-t}: int_{t_b}^{t_a} e^{-(p-1) t} / t dt
                let tb = -b.ln();
                let ta = if a == 0.0 { f64::INFINITY } else { -a.ln() };
                let s = p - 1.0;
                if s > 0.0 {
                    e1(s * tb) - if ta.is_infinite() { 0.0 } else { e1(s * ta) }
                } else if s == 0.0 {
                    if ta.is_infinite() {
                        f64::INFINITY
                    } else {
                        ta.ln() - tb.ln()
                    }
                } else if ta.is_infinite() {
                    f64::INFINITY
                } else {
                    ei(-s * ta) - ei(-s * tb)
                }
            }
        }
    }

    /// Whether int_0 x^p k(x) dx converges at the origin.
    pub fn moment_finite_at_zero(&self, p: f64) -> bool {
        match *self {
            Kernel::Power(alpha) => p > alpha,
            Kernel::LogSingular => p > 1.0,
        }
    }
}

/// coef * kernel(|x|) for lo < |x| < hi on `side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub side: Side,
    pub kernel: Kernel,
    pub coef: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Piece {
    pub fn density_abs(&self, r: f64) -> f64 {
        if r > self.lo && r < self.hi {
            self.coef * self.kernel.eval(r)
        } else {
            0.0
        }
    }
    /// int over the piece of |x|^p restricted to |x| in (a, b)
    pub fn moment_between(&self, p: f64, a: f64, b: f64) -> f64 {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        if hi <= lo {
            return 0.0;
        }
        self.coef * self.kernel.moment(p, lo, hi)
    }
}

/// Flattened measure: density pieces plus atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasureParts {
    pub pieces: Vec<Piece>,
    pub atoms: Vec<Atom>,
}

const ATOM_EQ_TOL: f64 = 1e-12;

fn same_location(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= ATOM_EQ_TOL * (1.0 + x.abs()))
}

impl MeasureParts {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && self.atoms.is_empty()
    }

    pub fn extend(&mut self, other: MeasureParts) {
        self.pieces.extend(other.pieces);
        self.atoms.extend(other.atoms);
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for p in &mut self.pieces {
            p.coef *= k;
        }
        for a in &mut self.atoms {
            a.w *= k;
        }
        self.cleaned()
    }

    pub fn reflected(mut self) -> Self {
        for p in &mut self.pieces {
            p.side = p.side.flip();
        }
        for a in &mut self.atoms {
            for v in &mut a.x {
                *v = -*v;
            }
        }
        self
    }

    /// Restriction to the signed 1-D interval lo <= x < hi.
    pub fn restricted(self, lo: f64, hi: f64) -> Self {
        let mut out = MeasureParts::default();
        for p in self.pieces {
            let (a, b) = match p.side {
                Side::Pos => (lo.max(0.0), hi),
                Side::Neg => ((-hi).max(0.0), -lo),
            };
            let nlo = p.lo.max(a);
            let nhi = p.hi.min(b);
            if nhi > nlo {
                out.pieces.push(Piece { lo: nlo, hi: nhi, ..p });
            }
        }
        out.atoms = self.atoms.into_iter().filter(|a| a.x[0] >= lo && a.x[0] < hi).collect();
        out
    }

    pub fn side(&self, side: Side) -> Self {
        match side {
            Side::Pos => self.clone().restricted(0.0, f64::INFINITY),
            Side::Neg => self.clone().restricted(f64::NEG_INFINITY, 0.0),
        }
    }

    /// Drops empty pieces and zero atoms, merges atoms at the same location
    /// and adjacent identical-family pieces with equal coefficients.
    pub fn cleaned(self) -> Self {
        let mut atoms: Vec<Atom> = Vec::new();
        for a in self.atoms {
            if a.w <= 0.0 {
                continue;
            }
            if let Some(b) = atoms.iter_mut().find(|b| same_location(&b.x, &a.x)) {
                b.w += a.w;
            } else {
                atoms.push(a);
            }
        }
        let mut pieces: Vec<Piece> = self.pieces.into_iter().filter(|p| p.coef > 0.0 && p.hi > p.lo).collect();
        pieces.sort_by(|a, b| {
            a.side
                .cmp(&b.side)
                .then(kernel_order(&a.kernel).partial_cmp(&kernel_order(&b.kernel)).unwrap())
                .then(a.lo.partial_cmp(&b.lo).unwrap())
        });
        let mut merged: Vec<Piece> = Vec::new();
        for p in pieces {
            if let Some(last) = merged.last_mut() {
                if last.side == p.side
                    && last.kernel.same_family(&p.kernel)
                    && last.hi == p.lo
                    && (last.coef - p.coef).abs() <= 1e-14 * last.coef
                {
                    last.hi = p.hi;
                    continue;
                }
            }
            merged.push(p);
        }
        MeasureParts { pieces: merged, atoms }
    }

    /// Density at the signed point x (1-D).
    pub fn density(&self, x: f64) -> f64 {
        let side = if x > 0.0 { Side::Pos } else { Side::Neg };
        self.pieces.iter().filter(|p| p.side == side).map(|p| p.density_abs(x.abs())).sum()
    }

    pub fn total_mass(&self) -> f64 {
        let d: f64 = self.pieces.iter().map(|p| p.moment_between(0.0, 0.0, f64::INFINITY)).sum();
        d + self.atoms.iter().map(|a| a.w).sum::<f64>()
    }

    /// Breakpoints of all pieces on one side, sorted.
    fn breakpoints(side: Side, sets: &[&MeasureParts]) -> Vec<f64> {
        let mut pts: Vec<f64> = sets
            .iter()
            .flat_map(|m| m.pieces.iter().filter(|p| p.side == side).flat_map(|p| [p.lo, p.hi]))
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// Kernel coefficients active on the open interval (a, b).
    fn active(&self, side: Side, a: f64, b: f64) -> Vec<(Kernel, f64)> {
        let mut out: Vec<(Kernel, f64)> = Vec::new();
        for p in self.pieces.iter().filter(|p| p.side == side && p.lo <= a && p.hi >= b) {
            if let Some(e) = out.iter_mut().find(|(k, _)| k.same_family(&p.kernel)) {
                e.1 += p.coef;
            } else {
                out.push((p.kernel, p.coef));
            }
        }
        out
    }

    /// Exact self - other within the density families. Fails when the
    /// difference would be negative or leave the families.
    pub fn subtract(&self, other: &MeasureParts) -> Result<MeasureParts> {
        let mut out = MeasureParts::default();
        for side in [Side::Pos, Side::Neg] {
            let pts = Self::breakpoints(side, &[self, other]);
            for w in pts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let mine = self.active(side, a, b);
                let theirs = other.active(side, a, b);
                for (k, c) in &theirs {
                    match mine.iter().find(|(m, _)| m.same_family(k)) {
                        Some((_, cm)) if *cm >= c * (1.0 - 1e-12) => {}
                        Some(_) => {
                            return Err(HuntError::NotDominated(format!(
                                "density coefficient exceeded on ({a}, {b})"
                            )))
                        }
                        None => {
                            return Err(HuntError::SignedPartNotRepresentable(format!(
                                "{k:?} on ({a}, {b}) has no matching family to subtract from"
                            )))
                        }
                    }
                }
                for (k, cm) in mine {
                    let c = theirs.iter().find(|(t, _)| t.same_family(&k)).map(|x| x.1).unwrap_or(0.0);
                    let rest = cm - c;
                    if rest > 1e-14 * cm {
                        out.pieces.push(Piece { side, kernel: k, coef: rest, lo: a, hi: b });
                    }
                }
            }
        }
        let mut atoms = self.atoms.clone();
        for o in &other.atoms {
            match atoms.iter_mut().find(|a| same_location(&a.x, &o.x)) {
                Some(a) if a.w >= o.w * (1.0 - 1e-12) => a.w -= o.w,
                _ => return Err(HuntError::NotDominated(format!("atom at {:?} not dominated", o.x))),
            }
        }
        out.atoms = atoms.into_iter().filter(|a| a.w > 1e-14).collect();
        Ok(out.cleaned())
    }

    /// Positive part of the signed measure self - other.
    pub fn positive_part_minus(&self, other: &MeasureParts) -> Result<MeasureParts> {
        let mut out = MeasureParts::default();
        for side in [Side::Pos, Side::Neg] {
            let pts = Self::breakpoints(side, &[self, other]);
            for w in pts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let mine = self.active(side, a, b);
                if mine.is_empty() {
                    continue;
                }
                let theirs = other.active(side, a, b);
                if theirs.is_empty() {
                    for (k, c) in mine {
                        out.pieces.push(Piece { side, kernel: k, coef: c, lo: a, hi: b });
                    }
                    continue;
                }
                if mine.len() == 1 && theirs.len() == 1 && mine[0].0.same_family(&theirs[0].0) {
                    let rest = mine[0].1 - theirs[0].1;
                    if rest > 0.0 {
                        out.pieces.push(Piece { side, kernel: mine[0].0, coef: rest, lo: a, hi: b });
                    }
                    continue;
                }
                return Err(HuntError::SignedPartNotRepresentable(format!(
                    "positive part of mixed densities on ({a}, {b})"
                )));
            }
        }
        // atoms and densities are mutually singular
        for a in &self.atoms {
            let sub = other.atoms.iter().find(|o| same_location(&o.x, &a.x)).map(|o| o.w).unwrap_or(0.0);
            if a.w - sub > 0.0 {
                out.atoms.push(Atom { x: a.x.clone(), w: a.w - sub });
            }
        }
        Ok(out.cleaned())
    }

    /// Converts back into components, preferring the plain parametric forms.
    pub fn to_components(&self) -> Vec<LevyComponent> {
        let parts = self.clone().cleaned();
        let mut out = Vec::new();
        let mut used = vec![false; parts.pieces.len()];
        for i in 0..parts.pieces.len() {
            if used[i] {
                continue;
            }
            let p = parts.pieces[i];
            used[i] = true;
            match p.kernel {
                Kernel::Power(alpha) if p.lo == 0.0 => {
                    // pair with the mirror piece when it shares alpha and cutoff
                    let mirror = (0..parts.pieces.len()).find(|&j| {
                        !used[j] && {
                            let q = parts.pieces[j];
                            q.side != p.side && q.kernel.same_family(&p.kernel) && q.lo == 0.0 && q.hi == p.hi
                        }
                    });
                    let other = mirror.map(|j| {
                        used[j] = true;
                        parts.pieces[j].coef
                    });
                    let (c_plus, c_minus) = match p.side {
                        Side::Pos => (p.coef, other.unwrap_or(0.0)),
                        Side::Neg => (other.unwrap_or(0.0), p.coef),
                    };
                    out.push(LevyComponent::StablePower { alpha, c_plus, c_minus, cutoff: p.hi });
                }
                Kernel::Power(alpha) => {
                    let (inner, lo, hi) = match p.side {
                        Side::Pos => (
                            LevyComponent::StablePower { alpha, c_plus: 1.0, c_minus: 0.0, cutoff: f64::INFINITY },
                            p.lo,
                            p.hi,
                        ),
                        Side::Neg => (
                            LevyComponent::StablePower { alpha, c_plus: 0.0, c_minus: 1.0, cutoff: f64::INFINITY },
                            -p.hi,
                            -p.lo,
                        ),
                    };
                    out.push(LevyComponent::Restricted { inner: Box::new(inner), scale: p.coef, lo, hi });
                }
                Kernel::LogSingular => {
                    let base = if p.lo == 0.0 {
                        LevyComponent::LogSingular { c: p.coef, delta: p.hi }
                    } else {
                        LevyComponent::Restricted {
                            inner: Box::new(LevyComponent::LogSingular { c: 1.0, delta: p.hi }),
                            scale: p.coef,
                            lo: p.lo,
                            hi: p.hi,
                        }
                    };
                    out.push(match p.side {
                        Side::Pos => base,
                        Side::Neg => LevyComponent::Reflected(Box::new(base)),
                    });
                }
            }
        }
        if !parts.atoms.is_empty() {
            out.push(LevyComponent::Atoms(parts.atoms));
        }
        out
    }
}

fn kernel_order(k: &Kernel) -> f64 {
    match *k {
        Kernel::Power(a) => a,
        Kernel::LogSingular => 10.0,
    }
}

impl LevyComponent {
    pub fn parts(&self) -> MeasureParts {
        match self {
            LevyComponent::StablePower { alpha, c_plus, c_minus, cutoff } => {
                let mut pieces = Vec::new();
                for (side, c) in [(Side::Pos, *c_plus), (Side::Neg, *c_minus)] {
                    if c > 0.0 {
                        pieces.push(Piece { side, kernel: Kernel::Power(*alpha), coef: c, lo: 0.0, hi: *cutoff });
                    }
                }
                MeasureParts { pieces, atoms: vec![] }
            }
            LevyComponent::LogSingular { c, delta } => MeasureParts {
                pieces: vec![Piece { side: Side::Pos, kernel: Kernel::LogSingular, coef: *c, lo: 0.0, hi: *delta }],
                atoms: vec![],
            },
            LevyComponent::Atoms(atoms) => MeasureParts { pieces: vec![], atoms: atoms.clone() },
            LevyComponent::Restricted { inner, scale, lo, hi } => inner.parts().restricted(*lo, *hi).scaled(*scale),
            LevyComponent::Reflected(inner) => inner.parts().reflected(),
            LevyComponent::TypeAlphaBeta(d) => MeasureParts {
                pieces: d
                    .terms
                    .iter()
                    .map(|t| Piece { side: Side::Pos, kernel: Kernel::Power(t.index), coef: t.scale, lo: 0.0, hi: 1.0 })
                    .collect(),
                atoms: vec![],
            },
        }
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        let one_d = || -> Result<()> {
            if dim != 1 {
                Err(HuntError::DimensionMismatch { expected: 1, got: dim })
            } else {
                Ok(())
            }
        };
        match self {
            LevyComponent::StablePower { alpha, c_plus, c_minus, cutoff } => {
                one_d()?;
                if *alpha >= 2.0 {
                    return Err(HuntError::NonIntegrableLevyMeasure(format!(
                        "singularity exponent 1+alpha = {} >= 3",
                        1.0 + alpha
                    )));
                }
                if !(*alpha > 0.0) || *c_plus < 0.0 || *c_minus < 0.0 || !(*cutoff > 0.0) {
                    return Err(HuntError::InvalidParameter(format!(
                        "stable_power needs alpha in (0,2), c >= 0, cutoff > 0 (alpha={alpha}, cutoff={cutoff})"
                    )));
                }
            }
            LevyComponent::LogSingular { c, delta } => {
                one_d()?;
                if !(*c > 0.0) || !(*delta > 0.0 && *delta < 1.0) {
                    return Err(HuntError::InvalidParameter("log_singular needs c > 0 and delta in (0,1)".into()));
                }
            }
            LevyComponent::Atoms(atoms) => {
                for a in atoms {
                    if a.x.len() != dim {
                        return Err(HuntError::DimensionMismatch { expected: dim, got: a.x.len() });
                    }
                    if !(a.w > 0.0) || !a.w.is_finite() || a.x.iter().any(|v| !v.is_finite()) {
                        return Err(HuntError::InvalidParameter("atom weights must be positive and finite".into()));
                    }
                    if a.x.iter().all(|v| *v == 0.0) {
                        return Err(HuntError::AtomAtOrigin);
                    }
                }
            }
            LevyComponent::Restricted { inner, scale, lo, hi } => {
                one_d()?;
                if !(*scale >= 0.0) || !(lo < hi) {
                    return Err(HuntError::InvalidParameter("restriction needs scale >= 0 and lo < hi".into()));
                }
                inner.validate(dim)?;
            }
            LevyComponent::Reflected(inner) => inner.validate(dim)?,
            LevyComponent::TypeAlphaBeta(d) => {
                one_d()?;
                if !(0.0 < d.alpha && d.alpha < d.beta && d.beta < 1.0) || !(d.c > 1.0) {
                    return Err(HuntError::InvalidParameter("type_alpha_beta needs 0 < alpha < beta < 1 and c > 1".into()));
                }
                if d.terms.is_empty() {
                    return Err(HuntError::InvalidParameter("type_alpha_beta density has no terms".into()));
                }
                for t in &d.terms {
                    if !(t.scale > 0.0) || !(t.index > 0.0) {
                        return Err(HuntError::InvalidParameter("density terms need scale > 0, index > 0".into()));
                    }
                    if t.index >= 2.0 {
                        return Err(HuntError::NonIntegrableLevyMeasure(format!(
                            "singularity exponent {} >= 3",
                            1.0 + t.index
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
