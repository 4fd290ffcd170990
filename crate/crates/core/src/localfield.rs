//! The completed local ring at the prime above `p` in the `p`-th Carlitz
//! cyclotomic field, modelled as `(A/p)[λ]/(λ^N)` with `N = q^d`.
//!
//! `λ` is a root of the torsion polynomial
//! `X^(q^d - 1) + b_{d-1} X^(q^(d-1) - 1) + ... + b_0`, which is Eisenstein
//! at `p`, and `t` becomes a power series `t(λ)` with constant term `t mod p`.

use std::sync::{Arc, OnceLock};

use crate::algebra::gf::FieldElem;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::residue::{ResidueElem, ResidueField};
use crate::algebra::series::{SeriesRing, TruncSeries};
use crate::carlitz::bernoulli::{cyclotomic_poly, exp_coeffs};
use crate::error::{Error, Result};

const MAX_NEWTON_STEPS: usize = 64;

/// `u · dλ` modulo `λ^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDifferential {
    pub coeffs: TruncSeries,
}

impl LocalDifferential {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// Local data for one index `n`: whether `dlog λ_n` vanishes modulo
/// `λ^N`, and for `n >= 2` the value of `BC_n mod p` it encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalIndex {
    pub n: u32,
    pub dlog_vanished: bool,
    pub bc: Option<ResidueElem>,
}

/// `π = ē^(-1)(λ)` together with `π'`, both at the model's working order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenUniformizer {
    pub pi: TruncSeries,
    pub derivative: TruncSeries,
}

#[derive(Debug)]
pub struct LocalModel {
    residue: Arc<ResidueField>,
    truncation: usize,
    /// `q^d`.
    full_order: usize,
    /// Two extra orders so that `dlog(gλ/λ)` is exact mod `λ^N`.
    ring: SeriesRing<ResidueField>,
    t_series: TruncSeries,
    torsion_values: Vec<TruncSeries>,
    newton_steps: usize,
    /// `φ(t^j)(λ)` for `j < d`.
    orbit: Vec<TruncSeries>,
    uniformizer: OnceLock<EigenUniformizer>,
    unit_dlogs: OnceLock<Vec<TruncSeries>>,
}

/// Values of polynomials over `F_q` at a fixed series, via cached powers.
struct Evaluator<'a> {
    ring: &'a SeriesRing<ResidueField>,
    embed: &'a [ResidueElem],
    powers: Vec<TruncSeries>,
}

impl Evaluator<'_> {
    fn eval(&self, f: &Poly) -> TruncSeries {
        let mut acc = self.ring.zero();
        for (c, power) in f.coeffs().iter().zip(&self.powers) {
            if !c.is_zero() {
                self.ring.add_scaled(&mut acc, self.embed[c.code() as usize], power);
            }
        }
        acc
    }
}

impl LocalModel {
    pub fn new(residue: Arc<ResidueField>) -> Result<Self> {
        let full_order = residue.order() as usize;
        Self::with_truncation(residue, full_order)
    }

    /// A model modulo `λ^truncation` for `truncation >= q^d`. Only
    /// [`LocalModel::bc_from_local`] and the eigenproperty of `π` are tied
    /// to `q^d`; the global objects expand to any precision.
    pub fn with_truncation(residue: Arc<ResidueField>, truncation: usize) -> Result<Self> {
        let q = residue.q() as usize;
        let d = residue.prime_degree();
        let full_order = residue.order() as usize;
        if truncation < full_order {
            return Err(Error::OutOfRange { n: truncation as u64, range: format!(">= {full_order}") });
        }
        let ring = SeriesRing::new(residue.clone(), truncation + 2);
        let embed: Vec<ResidueElem> =
            (0..q as u32).map(|c| residue.reduce(&Poly::constant(FieldElem::from_code(c)))).collect();

        let poly_ring = residue.poly_ring();
        let torsion = cyclotomic_poly(poly_ring, residue.prime());
        let mut b = Vec::with_capacity(d);
        let mut qi = 1usize;
        for _ in 0..d {
            b.push(torsion.coeff(qi - 1));
            qi *= q;
        }
        let db: Vec<Poly> = b.iter().map(|p| poly_ring.derivative(p)).collect();
        let max_deg = b.iter().filter_map(|p| p.degree().finite()).max().unwrap_or(0);

        let mut t_series = ring.constant(residue.t_class());
        let mut previous = 0usize;
        let mut steps = 0usize;
        let torsion_values = loop {
            let eval = Evaluator { ring: &ring, embed: &embed, powers: powers(&ring, &t_series, max_deg) };
            let values: Vec<TruncSeries> = b.iter().map(|p| eval.eval(p)).collect();
            let residual = relation(&ring, &values, q, full_order);
            let Some(v) = residual.valuation() else { break values };
            if steps == MAX_NEWTON_STEPS || (steps > 0 && v <= previous) {
                return Err(Error::Consistency(format!("Newton iteration for t(λ) stalled at valuation {v}")));
            }
            let mut slope = ring.zero();
            let mut qi = 1usize;
            for p in &db {
                let shifted = ring.shift_up(&eval.eval(p), qi - 1);
                slope = ring.add(&slope, &shifted);
                qi *= q;
            }
            t_series = ring.sub(&t_series, &ring.div(&residual, &slope)?);
            previous = v;
            steps += 1;
        };

        let mut orbit = Vec::with_capacity(d);
        let mut y = ring.var();
        for _ in 0..d {
            let next = ring.add(&ring.mul(&t_series, &y), &ring.frobenius_pow(&y, q as u64));
            orbit.push(std::mem::replace(&mut y, next));
        }

        Ok(LocalModel {
            residue,
            truncation,
            full_order,
            ring,
            t_series,
            torsion_values,
            newton_steps: steps,
            orbit,
            uniformizer: OnceLock::new(),
            unit_dlogs: OnceLock::new(),
        })
    }

    pub fn residue(&self) -> &Arc<ResidueField> {
        &self.residue
    }

    /// `N`, equal to `q^d` unless built with [`LocalModel::with_truncation`].
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// The series ring at working order `N + 2`.
    pub fn ring(&self) -> &SeriesRing<ResidueField> {
        &self.ring
    }

    pub fn t_series(&self) -> &TruncSeries {
        &self.t_series
    }

    /// `b_i(t(λ))` for `i < d`.
    pub fn torsion_values(&self) -> &[TruncSeries] {
        &self.torsion_values
    }

    pub fn newton_steps(&self) -> usize {
        self.newton_steps
    }

    /// `sum_i b_i(t(λ)) λ^(q^i - 1) + λ^(q^d - 1)`, zero at working order.
    pub fn eisenstein_residual(&self) -> TruncSeries {
        relation(&self.ring, &self.torsion_values, self.residue.q() as usize, self.full_order)
    }

    /// Applies the operator `φ(a)`, with coefficients in `t(λ)`, to `x`.
    pub fn apply_carlitz(&self, a: &Poly, x: &TruncSeries) -> TruncSeries {
        let r = &self.ring;
        let q = self.residue.q() as u64;
        let mut acc = r.zero();
        let mut y = x.clone();
        for (j, c) in a.coeffs().iter().enumerate() {
            if !c.is_zero() {
                r.add_scaled(&mut acc, self.embed(*c), &y);
            }
            if j + 1 < a.coeffs().len() {
                y = r.add(&r.mul(&self.t_series, &y), &r.frobenius_pow(&y, q));
            }
        }
        acc
    }

    fn embed(&self, c: FieldElem) -> ResidueElem {
        self.residue.reduce(&Poly::constant(c))
    }

    /// `g λ = φ(a)(λ)` for the canonical representative `a` of `g`.
    pub fn galois_image(&self, g: ResidueElem) -> Result<TruncSeries> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = self.residue.lift(g);
        let mut acc = self.ring.zero();
        for (c, y) in a.coeffs().iter().zip(&self.orbit) {
            if !c.is_zero() {
                self.ring.add_scaled(&mut acc, self.embed(*c), y);
            }
        }
        Ok(acc)
    }

    /// `u'/u` modulo `λ^N`; `u` may be given at any order `>= N + 1`.
    pub fn dlog(&self, u: &TruncSeries) -> Result<LocalDifferential> {
        let ring = self.ring.with_order(self.truncation + 1);
        let u = ring.coerce(u);
        let du = ring.derivative(&u);
        let out = ring.div(&du, &u)?;
        Ok(LocalDifferential { coeffs: self.ring.with_order(self.truncation).coerce(&out) })
    }

    /// `π` solving `ē(π) = λ`, by the fixed point `π = λ - sum_{i>0} e_i π^(q^i)`.
    pub fn eigen_uniformizer(&self) -> &EigenUniformizer {
        self.uniformizer.get_or_init(|| {
            let r = &self.ring;
            let q = self.residue.q() as u64;
            let e = exp_coeffs(&self.residue, self.residue.prime_degree()).expect("d coefficients exist");
            let mut pi = r.var();
            loop {
                let mut next = r.var();
                let mut qi = 1u64;
                for &ei in &e[1..] {
                    qi *= q;
                    let term = r.frobenius_pow(&pi, qi);
                    r.add_scaled(&mut next, self.residue.neg(ei), &term);
                }
                if next == pi {
                    break;
                }
                pi = next;
            }
            let derivative = r.derivative(&pi);
            EigenUniformizer { pi, derivative }
        })
    }

    /// `ē(x) = sum_{i<d} e_i x^(q^i)` at working order.
    pub fn truncated_exp(&self, x: &TruncSeries) -> TruncSeries {
        let r = &self.ring;
        let q = self.residue.q() as u64;
        let e = exp_coeffs(&self.residue, self.residue.prime_degree()).expect("d coefficients exist");
        let mut acc = r.zero();
        let mut qi = 1u64;
        for ei in e {
            r.add_scaled(&mut acc, ei, &r.frobenius_pow(x, qi));
            qi *= q;
        }
        acc
    }

    /// `dlog(gλ/λ)` for every unit, indexed by residue code minus one.
    fn unit_dlogs(&self) -> &[TruncSeries] {
        self.unit_dlogs.get_or_init(|| {
            self.residue
                .units()
                .map(|g| {
                    let image = self.galois_image(g).expect("units are nonzero");
                    let ratio = self.ring.shift_down(&image, 1);
                    self.dlog(&ratio).expect("gλ/λ is a unit").coeffs
                })
                .collect()
        })
    }

    /// `-sum_g χ(g)^(-n) dlog(gλ/λ)`, the image of `dlog λ_n`.
    pub fn dlog_lambda_component(&self, n: u32) -> Result<LocalDifferential> {
        let units = self.residue.order() - 1;
        if n == 0 || n >= units {
            return Err(Error::OutOfRange { n: n as u64, range: format!("1..={}", units - 1) });
        }
        let k = &self.residue;
        let out_ring = self.ring.with_order(self.truncation);
        let mut acc = out_ring.zero();
        for (g, series) in k.units().zip(self.unit_dlogs()) {
            let coeff = k.pow_signed(g, -(n as i64)).expect("g is a unit");
            out_ring.add_scaled(&mut acc, coeff, series);
        }
        Ok(LocalDifferential { coeffs: out_ring.neg(&acc) })
    }

    /// `BC_n mod p` read off from `dlog λ_n = BC_n π^(n-1) π' dλ mod λ^(q^d)`.
    pub fn bc_from_local(&self, n: u32) -> Result<ResidueElem> {
        if n < 2 {
            return Err(Error::OutOfRange { n: n as u64, range: format!("2..={}", self.full_order - 2) });
        }
        let r = self.ring.with_order(self.full_order);
        let component = LocalDifferential { coeffs: r.coerce(&self.dlog_lambda_component(n)?.coeffs) };
        let u = self.eigen_uniformizer();
        let pi = r.coerce(&u.pi);
        let basis = r.mul(&r.pow(&pi, n as u64 - 1), &r.coerce(&u.derivative));
        let c = component.coeffs.coeff(n as usize - 1);
        if r.scale(c, &basis) != component.coeffs {
            return Err(Error::Consistency(format!(
                "dlog λ_{n} is not a multiple of π^{}·π' modulo λ^{}",
                n - 1,
                self.full_order
            )));
        }
        Ok(c)
    }

    /// [`LocalModel::bc_from_local`] for every `2 <= n <= q^d - 2` plus the
    /// vanishing of `dlog λ_1`, building `π^(n-1) π'` incrementally.
    pub fn local_indices(&self) -> Result<Vec<LocalIndex>> {
        let r = self.ring.with_order(self.full_order);
        let u = self.eigen_uniformizer();
        let pi = r.coerce(&u.pi);
        let mut basis = r.coerce(&u.derivative);
        let top = self.full_order as u32 - 2;
        let mut out = Vec::with_capacity(top as usize);
        for n in 1..=top {
            let component = r.coerce(&self.dlog_lambda_component(n)?.coeffs);
            let dlog_vanished = component.is_zero();
            if n == 1 {
                out.push(LocalIndex { n, dlog_vanished, bc: None });
                continue;
            }
            basis = r.mul(&basis, &pi);
            let c = component.coeff(n as usize - 1);
            if r.scale(c, &basis) != component {
                return Err(Error::Consistency(format!(
                    "dlog λ_{n} is not a multiple of π^{}·π' modulo λ^{}",
                    n - 1,
                    self.full_order
                )));
            }
            out.push(LocalIndex { n, dlog_vanished, bc: Some(c) });
        }
        Ok(out)
    }

    /// Series as text in `λ`, lowest degree first.
    pub fn render(&self, s: &TruncSeries) -> String {
        let terms: Vec<String> = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let coeff = self.residue.render(c);
                let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
                match (i, coeff.as_str()) {
                    (0, _) => coeff,
                    (1, "1") => "λ".to_string(),
                    (_, "1") => format!("λ^{i}"),
                    (1, _) => format!("{coeff}*λ"),
                    _ => format!("{coeff}*λ^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            format!("{} + O(λ^{})", terms.join(" + "), s.order())
        }
    }
}

fn powers(ring: &SeriesRing<ResidueField>, x: &TruncSeries, max: usize) -> Vec<TruncSeries> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(ring.one());
    for i in 0..max {
        out.push(ring.mul(&out[i], x));
    }
    out
}

fn relation(ring: &SeriesRing<ResidueField>, values: &[TruncSeries], q: usize, full_order: usize) -> TruncSeries {
    let mut acc = ring.monomial(FieldElem::ONE, full_order - 1);
    let mut qi = 1usize;
    for v in values {
        acc = ring.add(&acc, &ring.shift_up(v, qi - 1));
        qi *= q;
    }
    acc
}

/// Convenience constructor from a prime given over `ring`.
pub fn local_model(ring: &PolyRing, prime: &Poly) -> Result<LocalModel> {
    LocalModel::new(ResidueField::new(ring.field().clone(), prime)?)
}
