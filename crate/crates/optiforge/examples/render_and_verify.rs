//! Render a natural-language description of a problem, verify it
//! component-wise, then corrupt it and watch the checks fail.
//!
//!     cargo run --example render_and_verify

use optiforge::describe::{render_description, verify_description};
use optiforge::fixtures;

fn main() -> optiforge::Result<()> {
    let w = fixtures::farming_lp();
    let description = render_description(&w, 1)?;
    println!("--- rendered description ---\n{}\n", description.text);

    let report = verify_description(&description, &w);
    println!(
        "five checks on the faithful rendition: pass = {}\n",
        report.pass()
    );

    let mut corrupted = description.clone();
    corrupted.text = corrupted.text.replace("2000", "2100");
    let report = verify_description(&corrupted, &w);
    println!("after editing 2000 -> 2100:");
    for failure in &report.failures {
        println!("  {failure}");
    }
    Ok(())
}
