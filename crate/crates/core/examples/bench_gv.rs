use std::time::Instant;
use voacx::complex::*;
use voacx::eprod::slot;
use voacx::ratfunc::{RatFunc, Var};
use voacx::voa::*;
use voacx::wspace::e_element;

fn main() {
    let c = VoaContext::standard(6, 3);
    let zr = |i: u32| RatFunc::var(Var::z(i));
    let a = gv_basis_state(vec![1]);
    let phi = Cochain::from_e(e_element(gv_vacuum(), 1), 2);
    let rep = gv_representative(&phi, DeltaSigns::default()).unwrap();
    let slots = vec![slot(&a, zr(1)), slot(&a, zr(2))];
    let t = Instant::now();
    let s = rep.eval_s(&gv_vacuum(), &slots, &c).unwrap();
    println!("rep eval: {:?} zero={}", t.elapsed(), s.is_zero());
    let t = Instant::now();
    let s = rep.eval_s(&gv_basis_state(vec![1, 1]), &slots, &c).unwrap();
    println!("rep eval aa': {:?} zero={}", t.elapsed(), s.is_zero());
    let drep = delta(&rep, DeltaSigns::default()).unwrap();
    let dslots = vec![slot(&a, zr(1)), slot(&a, zr(2)), slot(&a, zr(3))];
    let t = Instant::now();
    let s = drep.eval_s(&gv_vacuum(), &dslots, &c).unwrap();
    println!("drep eval 1': {:?} zero={}", t.elapsed(), s.is_zero());
    let t = Instant::now();
    let s = drep.eval_s(&a, &dslots, &c).unwrap();
    println!("drep eval a': {:?} zero={}", t.elapsed(), s.is_zero());
}
