//! Drive the command runners from code and list the files they write.
//!
//! cargo run --example workbench

use delaykern::workbench::{run, Command, Format};

fn main() -> delaykern::Result<()> {
    let out = std::env::temp_dir().join("delaykern-example");
    for (command, format) in [(Command::Regions, Format::Svg), (Command::Circulant, Format::Json), (Command::ScalarSweep, Format::Csv)] {
        let summary = run(command, None, &out, format)?;
        for f in summary.files {
            println!("{command:?}: {}", f.display());
        }
    }
    Ok(())
}
