// Functor spec files and the command reports built on them.

use std::error::Error;

use excisive::cli::{cmd_limit, cmd_random, cmd_validate, FunctorSpecFile};
use excisive::exactlin::RingSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("excisive-spec-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let spec = FunctorSpecFile::parse(r#"{"ring": "Q", "N": 4, "kind": "P", "n": 1, "d": 2}"#)?;
    let path = dir.join("p12.json");
    std::fs::write(&path, spec.to_canonical_string())?;
    println!("{}", cmd_validate(&path)?);
    let limit = cmd_limit(&path, 4)?;
    println!("{limit}\n{}", limit.to_json_string());

    let (_, random) = cmd_random(RingSpec::PrimeField(5), 3, 1, 42)?;
    let text = random.to_canonical_string();
    assert_eq!(FunctorSpecFile::parse(&text)?.to_canonical_string(), text);
    println!("random spec, {} bytes, round trips", text.len());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
