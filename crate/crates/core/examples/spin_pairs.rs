//! Singlet and triplet spin-space functions with their invariants.

use photonic::spin::{all_functions, Which};

fn main() {
    let fs = all_functions();
    for f in &fs {
        println!("{f}");
        for w in [Which::Spin, Which::Space, Which::Both] {
            println!("   swap {w:?}: overlap {:+.3}", f.permute_labels(w).inner(f).re);
        }
        println!("   <S²> = {:.3}  <Sz> = {:+.3}", f.s2(), f.sz());
    }
}
