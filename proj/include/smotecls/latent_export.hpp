#pragma once

#include <string>

#include "smotecls/sampler.hpp"

namespace smotecls {

// Columns: z_1..z_h, y, pseudo, density, kept. Density is empty for rows
// the filter never scored (all majors, and minors under density-free filters).
void write_latent_csv(const std::string& path, const LatentView& view);

// Scatter of the latent points, colored by pseudo label; filtered-out points
// are drawn as crosses.
void write_latent_svg(const std::string& path, const LatentView& view);

void write_filter_report_csv(const std::string& path, const FilterReport& report);

}  // namespace smotecls
