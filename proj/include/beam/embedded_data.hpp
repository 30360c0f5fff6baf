#pragma once

#include <string_view>
#include <vector>

namespace beam::embedded {

struct DataFile {
  std::string_view name;  // file stem, e.g. "sbp_d4_order4"
  std::string_view text;
};

/// Contents of data/*.txt compiled into the library.
const std::vector<DataFile>& files();

}  // namespace beam::embedded
