#pragma once

#include <string_view>

namespace quadtmf::embedded {

extern const std::string_view kPiTmfTable;
extern const std::string_view kNamedForms;

}  // namespace quadtmf::embedded
