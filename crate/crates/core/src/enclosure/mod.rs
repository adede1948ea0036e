//! Range enclosures of a compiled system over a box and the Krawczyk
//! operators built from them.
//!
//! [`BoxEval`] memoizes every quantity derived from one box (natural
//! extensions, values at the center, the preconditioner, Krawczyk images) so
//! that the range tests, the certification tests and the precision checks
//! applied to the same box share evaluations.

mod linalg;

use std::cell::{Cell, OnceCell};
use std::rc::Rc;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{IBox, Interval};
use crate::poly::CompiledSystem;

pub use linalg::{mat_vec, midpoint_inverse, IMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtensionOrder {
    /// Natural Horner extension.
    Order0,
    /// Mean value form around the center.
    Order1,
    /// Second order Taylor form with an interval Hessian remainder.
    Order2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KrawczykVariant {
    /// `P - C F(P) + (I - C J(X)) (X - P)`.
    Order1,
    /// `P - C (F(P) + H) + (I - C J(P)) (X - P)` with `h_i = (X-P)^t H_i(X) (X-P)`.
    Order2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum KrawczykFailure {
    #[error("midpoint Jacobian is singular or ill-conditioned")]
    SingularMidpointJacobian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// The image misses the box: no root in it.
    Disjoint,
    /// The image lies in the interior of the box: exactly one root, inside the image.
    StrictlyInside,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct KrawczykImage {
    pub image: IBox,
    pub classification: Classification,
    /// `C F(P)`, the preconditioned residual at the center.
    pub center_step: Vec<Interval>,
}

#[derive(Clone, Debug)]
pub enum KrawczykOutcome {
    Failure(KrawczykFailure),
    Applied(KrawczykImage),
}

impl KrawczykOutcome {
    pub fn classification(&self) -> Option<Classification> {
        match self {
            KrawczykOutcome::Applied(k) => Some(k.classification),
            KrawczykOutcome::Failure(_) => None,
        }
    }

    pub fn is_disjoint(&self) -> bool {
        self.classification() == Some(Classification::Disjoint)
    }

    pub fn is_strictly_inside(&self) -> bool {
        self.classification() == Some(Classification::StrictlyInside)
    }

    pub fn image(&self) -> Option<&IBox> {
        match self {
            KrawczykOutcome::Applied(k) => Some(&k.image),
            KrawczykOutcome::Failure(_) => None,
        }
    }
}

/// Evaluation counters shared by every [`BoxEval`] of a solve. Each count is
/// one evaluation over a whole box or point: all of `F`, the full Jacobian,
/// or the Hessians of every component.
#[derive(Debug, Default)]
pub struct EvalCounter {
    f: Cell<u64>,
    j: Cell<u64>,
    h: Cell<u64>,
    h_krawczyk: Cell<u64>,
    h_reused: Cell<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub f: u64,
    pub j: u64,
    pub h: u64,
    /// Hessian evaluations issued by the order-2 Krawczyk operator itself.
    pub h_krawczyk: u64,
    /// Order-2 Krawczyk applications served by Hessians already computed for
    /// the order-2 range enclosure.
    pub h_reused: u64,
}

impl EvalCounter {
    pub fn snapshot(&self) -> EvalCounts {
        EvalCounts {
            f: self.f.get(),
            j: self.j.get(),
            h: self.h.get(),
            h_krawczyk: self.h_krawczyk.get(),
            h_reused: self.h_reused.get(),
        }
    }

    fn bump(c: &Cell<u64>) {
        c.set(c.get() + 1);
    }
}

/// Lazily computed enclosures over one box at the precision of `cs`.
pub struct BoxEval {
    cs: Arc<CompiledSystem>,
    x: IBox,
    counter: Rc<EvalCounter>,
    center: OnceCell<IBox>,
    offset: OnceCell<Vec<Interval>>,
    f_box: OnceCell<Vec<Interval>>,
    jac_box: OnceCell<IMatrix>,
    hess_box: OnceCell<Vec<IMatrix>>,
    f_center: OnceCell<Vec<Interval>>,
    jac_center: OnceCell<IMatrix>,
    precond: OnceCell<Option<IMatrix>>,
    center_step: OnceCell<Option<Vec<Interval>>>,
    order1: OnceCell<Vec<Interval>>,
    order2: OnceCell<Vec<Interval>>,
    quad: OnceCell<Vec<Interval>>,
    k1: OnceCell<KrawczykOutcome>,
    k2: OnceCell<KrawczykOutcome>,
}

impl BoxEval {
    pub fn new(cs: Arc<CompiledSystem>, x: IBox) -> Self {
        BoxEval::with_counter(cs, x, Rc::new(EvalCounter::default()))
    }

    pub fn with_counter(cs: Arc<CompiledSystem>, x: IBox, counter: Rc<EvalCounter>) -> Self {
        assert_eq!(cs.precision(), x.precision(), "box and system precision differ");
        assert_eq!(cs.dim(), x.dim(), "box and system dimension differ");
        BoxEval {
            cs,
            x,
            counter,
            center: OnceCell::new(),
            offset: OnceCell::new(),
            f_box: OnceCell::new(),
            jac_box: OnceCell::new(),
            hess_box: OnceCell::new(),
            f_center: OnceCell::new(),
            jac_center: OnceCell::new(),
            precond: OnceCell::new(),
            center_step: OnceCell::new(),
            order1: OnceCell::new(),
            order2: OnceCell::new(),
            quad: OnceCell::new(),
            k1: OnceCell::new(),
            k2: OnceCell::new(),
        }
    }

    pub fn system(&self) -> &Arc<CompiledSystem> {
        &self.cs
    }

    pub fn counter(&self) -> &Rc<EvalCounter> {
        &self.counter
    }

    pub fn bounds(&self) -> &IBox {
        &self.x
    }

    pub fn into_box(self) -> IBox {
        self.x
    }

    pub fn center(&self) -> &IBox {
        self.center.get_or_init(|| self.x.mid())
    }

    /// `X - P`.
    pub fn offset(&self) -> &[Interval] {
        self.offset.get_or_init(|| self.x.sub(self.center()))
    }

    /// Natural extension of `F` over the box.
    pub fn f_natural(&self) -> &[Interval] {
        self.f_box.get_or_init(|| {
            EvalCounter::bump(&self.counter.f);
            self.cs.eval_f(self.x.components())
        })
    }

    pub fn jacobian_natural(&self) -> &IMatrix {
        self.jac_box.get_or_init(|| {
            EvalCounter::bump(&self.counter.j);
            self.cs.eval_jacobian(self.x.components())
        })
    }

    pub fn hessians_natural(&self) -> &[IMatrix] {
        self.hess_box.get_or_init(|| self.compute_hessians())
    }

    fn compute_hessians(&self) -> Vec<IMatrix> {
        EvalCounter::bump(&self.counter.h);
        (0..self.cs.dim())
            .map(|i| self.cs.eval_hessian(i, self.x.components()))
            .collect()
    }

    pub fn f_center(&self) -> &[Interval] {
        self.f_center.get_or_init(|| {
            EvalCounter::bump(&self.counter.f);
            self.cs.eval_f(self.center().components())
        })
    }

    pub fn jacobian_center(&self) -> &IMatrix {
        self.jac_center.get_or_init(|| {
            EvalCounter::bump(&self.counter.j);
            self.cs.eval_jacobian(self.center().components())
        })
    }

    /// Approximate inverse of the midpoint Jacobian, `None` when singular.
    pub fn preconditioner(&self) -> Option<&IMatrix> {
        self.precond
            .get_or_init(|| midpoint_inverse(self.jacobian_center()).ok())
            .as_ref()
    }

    /// `C F(P)`, or `None` when the midpoint Jacobian is singular.
    pub fn center_step(&self) -> Option<&[Interval]> {
        self.center_step
            .get_or_init(|| self.preconditioner().map(|c| mat_vec(c, self.f_center())))
            .as_deref()
    }

    /// Mean value form `F(P) + J(X) (X - P)`.
    pub fn f_order1(&self) -> &[Interval] {
        self.order1.get_or_init(|| {
            let lin = mat_vec(self.jacobian_natural(), self.offset());
            self.f_center().iter().zip(&lin).map(|(a, b)| a.add(b)).collect()
        })
    }

    /// Taylor form `F(P) + J(P) (X - P) + 1/2 (X - P)^t H(X) (X - P)`.
    pub fn f_order2(&self) -> &[Interval] {
        self.order2.get_or_init(|| {
            let prec = self.x.precision();
            let half = Interval::from_f64(0.5, 0.5).with_precision(prec);
            let lin = mat_vec(self.jacobian_center(), self.offset());
            let quad = self.quadratic_terms();
            self.f_center()
                .iter()
                .zip(&lin)
                .zip(quad)
                .map(|((f, l), q)| f.add(l).add(&half.mul(q)))
                .collect()
        })
    }

    /// `(X - P)^t H_i(X) (X - P)` for each component.
    fn quadratic_terms(&self) -> &[Interval] {
        self.quad.get_or_init(|| {
            let d = self.offset();
            self.hessians_natural()
                .iter()
                .map(|h| dot(d, &mat_vec(h, d)))
                .collect()
        })
    }

    /// Range enclosure of the requested order.
    pub fn extension(&self, order: ExtensionOrder) -> &[Interval] {
        match order {
            ExtensionOrder::Order0 => self.f_natural(),
            ExtensionOrder::Order1 => self.f_order1(),
            ExtensionOrder::Order2 => self.f_order2(),
        }
    }

    /// Component `i` of the natural extension intersected with the
    /// extension of order `order`.
    pub fn working_extension(&self, order: ExtensionOrder, i: usize) -> Interval {
        let nat = &self.f_natural()[i];
        if order == ExtensionOrder::Order0 {
            return nat.clone();
        }
        nat.intersection(&self.extension(order)[i])
            .expect("two enclosures of the same range always overlap")
    }

    pub fn krawczyk(&self, variant: KrawczykVariant) -> &KrawczykOutcome {
        match variant {
            KrawczykVariant::Order1 => self.k1.get_or_init(|| self.apply_krawczyk(variant)),
            KrawczykVariant::Order2 => self.k2.get_or_init(|| self.apply_krawczyk(variant)),
        }
    }

    fn apply_krawczyk(&self, variant: KrawczykVariant) -> KrawczykOutcome {
        let Some(c) = self.preconditioner() else {
            return KrawczykOutcome::Failure(KrawczykFailure::SingularMidpointJacobian);
        };
        let step = self.center_step().expect("preconditioner exists").to_vec();
        let prec = self.x.precision();
        let d = self.offset();
        let (shift, jac) = match variant {
            KrawczykVariant::Order1 => (step.clone(), self.jacobian_natural()),
            KrawczykVariant::Order2 => {
                if self.hess_box.get().is_some() {
                    EvalCounter::bump(&self.counter.h_reused);
                } else {
                    EvalCounter::bump(&self.counter.h_krawczyk);
                }
                let quad = self.quadratic_terms();
                let rhs: Vec<Interval> = self.f_center().iter().zip(quad).map(|(f, h)| f.add(h)).collect();
                (mat_vec(c, &rhs), self.jacobian_center())
            }
        };
        let residual = linalg::identity_minus_product(c, jac, prec);
        let spread = mat_vec(&residual, d);
        let image: Vec<Interval> = self
            .center()
            .iter()
            .zip(&shift)
            .zip(&spread)
            .map(|((p, s), r)| p.sub(s).add(r))
            .collect();
        let image = IBox::new(image).expect("image has the box dimension");
        let classification = classify(&image, &self.x);
        KrawczykOutcome::Applied(KrawczykImage {
            image,
            classification,
            center_step: step,
        })
    }
}

fn dot(a: &[Interval], b: &[Interval]) -> Interval {
    let mut it = a.iter().zip(b).map(|(x, y)| x.mul(y));
    let first = it.next().expect("non-empty vectors");
    it.fold(first, |acc, v| acc.add(&v))
}

fn classify(image: &IBox, x: &IBox) -> Classification {
    if !image.intersects(x).expect("same dimension") {
        Classification::Disjoint
    } else if image.subset_of_interior(x).expect("same dimension") {
        Classification::StrictlyInside
    } else {
        Classification::Inconclusive
    }
}

/// Natural extension of the whole system over `x`.
pub fn eval_order0(cs: &Arc<CompiledSystem>, x: &IBox) -> Vec<Interval> {
    BoxEval::new(Arc::clone(cs), x.clone()).f_natural().to_vec()
}

/// Mean value form of the whole system over `x`.
pub fn eval_order1(cs: &Arc<CompiledSystem>, x: &IBox) -> Vec<Interval> {
    BoxEval::new(Arc::clone(cs), x.clone()).f_order1().to_vec()
}

/// Order-2 Taylor form of the whole system over `x`.
pub fn eval_order2(cs: &Arc<CompiledSystem>, x: &IBox) -> Vec<Interval> {
    BoxEval::new(Arc::clone(cs), x.clone()).f_order2().to_vec()
}

pub fn krawczyk(cs: &Arc<CompiledSystem>, variant: KrawczykVariant, x: &IBox) -> KrawczykOutcome {
    BoxEval::new(Arc::clone(cs), x.clone()).krawczyk(variant).clone()
}
