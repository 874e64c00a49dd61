// Shipped systems and user system files.
//
// Catalog: the saturating two-component example, a positive linear system
// with Metzler instantaneous part, a scalar system with equilibrium at 1, and
// a deliberately non-monotone fixture for exercising the validators. User
// systems load from JSON files with expression-string fields.

#ifndef MONOCERT_CATALOG_HPP
#define MONOCERT_CATALOG_HPP

#include <functional>
#include <string>
#include <vector>

#include "monocert/system.hpp"

namespace monocert {

struct CatalogEntry {
  std::string name;
  std::string summary;
  bool fixture = false;  // excluded from the "all catalog systems" batteries
  // Monotone on the whole space (true) or only on the orthant above the
  // equilibrium (false); the mirrored Appendix-style transform and the
  // below-side batteries need the former.
  bool monotone_everywhere = true;
  double default_r = 1.0;
  Vec default_y0;
  double default_t_end = 50.0;
  double default_delta = 1e-6;
  std::function<SystemDescriptor(double r)> build;
};

const std::vector<CatalogEntry>& catalog();

const CatalogEntry* find_catalog_entry(const std::string& name);

// Initial condition family for the saturating example: ((3k^2-1)/(k^2+1), k).
Vec example15_y0(double kappa);

// Catalog name or path to a JSON system file. r_override < 0 keeps defaults.
SystemDescriptor resolve_system(const std::string& name_or_path,
                                double r_override = -1.0);

SystemDescriptor load_system_file(const std::string& path,
                                  double r_override = -1.0);

}  // namespace monocert

#endif
