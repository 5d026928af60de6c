use voacx::complex::compensated_product_check;
use voacx::ratfunc::{qr, RatFunc, Var};
use voacx::voa::*;

fn main() {
    let a = gv_basis_state(vec![1]);
    let zr = |i: u32| RatFunc::var(Var::z(i));
    let mut rho: Vec<RatFunc> = vec![RatFunc::zero(); 4];
    rho[0] = RatFunc::one();
    rho[1] = RatFunc::constant(qr(1, 2));
    for nmax in [4u32, 6, 8] {
        let ctx = VoaContext::new(nmax, 2, qr(1, 1)).unwrap();
        let outs = compensated_product_check(
            &gv_vacuum(),
            &[(a.clone(), zr(1))],
            &[(a.clone(), zr(2))],
            &rho,
            &ctx,
        )
        .unwrap();
        for (l, o) in outs {
            println!(
                "nmax={nmax} eps^{l}: defect order {:?}, guaranteed {}, ok={}",
                o.defect_order, o.guaranteed_order, o.ok
            );
        }
    }
}
