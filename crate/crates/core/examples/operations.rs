//! Runs a few operations on the empty network and shows which fields each
//! one changes, then a call whose precondition fails.

use sncheck::kernel::Universe;
use sncheck::operations::{Op, OpCall};
use sncheck::snstate::SnState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::new(6)?;
    let (alice, bob, carol) = (u.elem(0)?, u.elem(1)?, u.elem(2)?);
    let (photo, reply) = (u.elem(0)?, u.elem(1)?);
    let friends = u.elem(0)?;

    let calls = [
        OpCall::new(
            Op::CreateAccount {
                person: alice,
                content: photo,
            },
            alice,
        ),
        OpCall::new(
            Op::CreateAccount {
                person: bob,
                content: reply,
            },
            bob,
        ),
        OpCall::new(
            Op::CreateList {
                list: friends,
                owner: alice,
            },
            alice,
        ),
        OpCall::new(
            Op::AddToList {
                list: friends,
                person: bob,
            },
            alice,
        ),
        OpCall::new(
            Op::TransmitToList {
                content: photo,
                list: friends,
            },
            alice,
        ),
    ];

    let mut s = SnState::empty();
    for call in calls {
        let next = call.apply(&s)?;
        println!("{call}\n    changes {:?}", s.changed_fields(&next));
        assert!(next.satisfies_invariants());
        s = next;
    }
    println!("\n{s}");

    let bad = OpCall::new(
        Op::GrantView {
            content: photo,
            person: carol,
        },
        alice,
    );
    match bad.apply(&s) {
        Ok(_) => println!("{bad} succeeded"),
        Err(e) => println!("{bad} is refused: {e}"),
    }
    Ok(())
}
