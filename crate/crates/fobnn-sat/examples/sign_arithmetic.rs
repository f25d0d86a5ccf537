//! The sign algebra underneath everything else.
//!
//! Arithmetic over the signs `{+, -, 0}` is set-valued: `+ + -` can
//! come out positive, negative or zero depending on the magnitudes the
//! signs abstract, so the sum maps to the full set. This example prints
//! the table of every operator and shows how the uncertainty surfaces.
//!
//! Run with: `cargo run --example sign_arithmetic`

use fobnn_sat::{abstract_apply, Op, Sign};

fn main() {
    let signs = [Sign::Pos, Sign::Neg, Sign::Zero];
    let ops = [Op::Add, Op::Sub, Op::Mul, Op::Div];

    for op in ops {
        println!("{op:?}:");
        print!("      ");
        for b in signs {
            print!("{b:>6}");
        }
        println!();
        for a in signs {
            print!("{a:>6}");
            for b in signs {
                print!("{:>6}", abstract_apply(op, a, b).to_string());
            }
            println!();
        }
        println!();
    }

    // Addition of opposed signs is where the abstraction loses the
    // most: all three outcomes stay possible.
    let sum = abstract_apply(Op::Add, Sign::Pos, Sign::Neg);
    println!("+ plus - may be any of {sum}");
    assert_eq!(sum.to_string(), "{+, -, 0}");

    // Multiplication keeps full precision: the sign of a product is a
    // function of the signs of its factors.
    for a in signs {
        for b in signs {
            assert_eq!(abstract_apply(Op::Mul, a, b).len(), 1);
        }
    }
    println!("every product has exactly one possible sign");

    // Division by zero has no outcome at all: the empty set.
    let div = abstract_apply(Op::Div, Sign::Pos, Sign::Zero);
    println!("+ divided by 0 gives {div} (no defined result)");
    assert!(div.is_empty());
}
