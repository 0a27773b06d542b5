//! Sets and relations over a small universe, with the relational operators
//! the state model is written in.

use sncheck::kernel::Universe;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::new(4)?;
    let owner = u.rel_of([(0, 1), (1, 1), (2, 3)])?;
    let viewp = u.rel_of([(0, 1), (0, 2), (1, 1), (2, 3), (2, 0)])?;

    println!("owner      = {owner}");
    println!("viewp      = {viewp}");
    println!("dom owner  = {}", owner.domain());
    println!("ran viewp  = {}", viewp.range());

    let c0 = u.singleton(0)?;
    println!("viewp[{{0}}] = {}", viewp.image(c0));
    println!("{{0}} ⩤ viewp = {}", viewp.dom_subtract(c0));

    // Who sees what the owner of each content sees: owner⁻¹ ; viewp.
    let shared = owner.inverse().compose(&viewp);
    println!("owner~;viewp = {shared}");

    let reassigned = owner.override_with(&u.pair(2, 0)?);
    println!("owner <+ {{2↦0}} = {reassigned}");
    println!("functional: {}", reassigned.is_partial_function());
    println!("bits of owner: {}", u.rel_hex(&owner));
    Ok(())
}
