//! Annotation prompt templates and placeholder substitution.

use codeplan_core::PlanKind;

use crate::error::CuratorError;

/// Byte-exact template fixtures, one per plan kind. The checked-in
/// files are the source of truth; tests compare rendered prompts
/// against independent substitution into these same bytes.
pub const CODE_TEMPLATE: &str = include_str!("../templates/code.txt");
pub const NL_TEMPLATE: &str = include_str!("../templates/nl.txt");
pub const EXEC_TEMPLATE: &str = include_str!("../templates/exec.txt");

const PROMPT_SLOT: &str = "{{Prompt}}";
const RESPONSE_SLOT: &str = "{{Response}}";

pub fn template_for(kind: PlanKind) -> &'static str {
    match kind {
        PlanKind::Code => CODE_TEMPLATE,
        PlanKind::Nl => NL_TEMPLATE,
        PlanKind::Exec => EXEC_TEMPLATE,
    }
}

/// Renders the annotation prompt for one pair. Slot positions are
/// located in the original template, so placeholder-looking text inside
/// the pair's own fields is carried through verbatim, never expanded.
pub fn build_annotation_prompt(
    pair: &codeplan_core::PromptResponsePair,
    kind: PlanKind,
) -> Result<String, CuratorError> {
    if pair.prompt.trim().is_empty() {
        return Err(CuratorError::EmptyField { id: pair.id.clone(), field: "prompt" });
    }
    if pair.response.trim().is_empty() {
        return Err(CuratorError::EmptyField { id: pair.id.clone(), field: "response" });
    }
    Ok(substitute(template_for(kind), &pair.prompt, &pair.response))
}

fn substitute(template: &str, prompt: &str, response: &str) -> String {
    let p = template.find(PROMPT_SLOT).expect("template has a {{Prompt}} slot");
    let r = template.find(RESPONSE_SLOT).expect("template has a {{Response}} slot");
    debug_assert!(p < r, "prompt slot precedes response slot");
    let mut out = String::with_capacity(template.len() + prompt.len() + response.len());
    out.push_str(&template[..p]);
    out.push_str(prompt);
    out.push_str(&template[p + PROMPT_SLOT.len()..r]);
    out.push_str(response);
    out.push_str(&template[r + RESPONSE_SLOT.len()..]);
    out
}
