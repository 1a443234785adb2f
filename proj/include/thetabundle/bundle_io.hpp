#ifndef THETABUNDLE_BUNDLE_IO_HPP
#define THETABUNDLE_BUNDLE_IO_HPP

#include <string>

#include "thetabundle/bundle.hpp"

namespace thetabundle {

// Accepts either {"A": [[..],[..]], "B": [[..],[..]]} or {"type": "C", "k": 1};
// the matrix form is validated against the classification table on load.
Bundle bundle_from_json_text(const std::string& text);
Bundle bundle_from_json_file(const std::string& path);

// "C", "C:2", "B1", "F", ... or a path to a JSON bundle file.
Bundle bundle_from_spec(const std::string& spec);

} // namespace thetabundle

#endif
