#ifndef LINFORMS_SERIALIZE_HPP
#define LINFORMS_SERIALIZE_HPP

#include <string>

#include "linforms/certify.hpp"
#include "linforms/matrix.hpp"
#include "linforms/powerexpr.hpp"

namespace linforms {

/// JSON text with sorted keys and a trailing newline, byte-deterministic
/// for equal inputs. Integers are decimal strings; symbolic expressions are
/// {"mul": [...]}, {"pow": [base, exp]}, or {"add": [...]} nodes.
std::string powerexpr_to_json(const PowerExpr& e);
PowerExpr powerexpr_from_json(const std::string& text);

std::string matrix_to_json(const MatrixSpec& mat);
MatrixSpec matrix_from_json(const std::string& text);

std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

}  // namespace linforms

#endif
