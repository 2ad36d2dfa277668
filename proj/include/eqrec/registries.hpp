#pragma once

// Built-in industry name registries: the 34-industry WIOD classification
// (UK, Germany, Greece, Russia) and the 38-industry Ukrainian classification.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eqrec {

inline const std::vector<std::string>& wiod34_registry() {
  static const std::vector<std::string> names = {
      "Agriculture, Hunting, Forestry and Fishing",
      "Mining and Quarrying",
      "Food, Beverages and Tobacco",
      "Textiles and Textile Products",
      "Leather, Leather and Footwear",
      "Wood and Products of Wood and Cork",
      "Pulp, Paper, Paper , Printing and Publishing",
      "Coke, Refined Petroleum and Nuclear Fuel",
      "Chemicals and Chemical Products",
      "Rubber and Plastics",
      "Other Nonmetallic Mineral",
      "Basic Metals and Fabricated Metal",
      "Machinery, Nec",
      "Electrical and Optical Equipment",
      "Transport Equipment",
      "Manufacturing, Nec; Recycling",
      "Electricity, Gas and Water Supply",
      "Construction",
      "Sale, Maintenance and Repair of Motor Vehicles and Motorcycles; Retail Sale of Fuel",
      "Wholesale Trade and Commission Trade, Except of Motor Vehicles and Motorcycles",
      "Retail Trade, Except of Motor Vehicles and Motorcycles; Repair of Household Goods",
      "Hotels and Restaurants",
      "Inland Transport",
      "Water Transport",
      "Air Transport",
      "Other Supporting and Auxiliary Transport Activities; Activities of Travel Agencies",
      "Post and Telecommunications",
      "Financial Intermediation",
      "Real Estate Activities",
      "Renting of M&Eq and Other Business Activities",
      "Public Admin and Defence; Compulsory Social Security",
      "Education",
      "Health and Social Work",
      "Other Community, Social and Personal Services",
  };
  return names;
}

inline const std::vector<std::string>& ukraine38_registry() {
  static const std::vector<std::string> names = {
      "Agriculture, hunting and related service activities",
      "Forestry, logging and related service activities",
      "Fishing, fish farming and related service activities",
      "Mining of coal and lignite; extraction of peat; mining of uranium and thorium ores",
      "Extraction of crude petroleum and natural gas",
      "Mining of quarrying, except of energy producing materials",
      "Manufacture of food products, beverages and tobacco",
      "Manufacture of textiles and textile products; manufacture of wearing apparel; dressing "
      "and dyeing of fur",
      "Manufacture of wood and wood products; manufacture of pulp, paper and paper products; "
      "publishing and printing",
      "Manufacture of coke oven products; processing of nuclear fuel",
      "Manufacture of refined petroleum products",
      "Manufacture of chemicals and chemical products; manufacture of rubber and plastic products",
      "Manufacture of other non-metallic mineral products",
      "Manufacture of basic metals and fabricated metal products",
      "Manufacture of machinery and equipment",
      "Manufacturing n.e.c.",
      "Production and distribution of electricity",
      "Manufacture of gas; distribution of gaseous fuels through mains",
      "Steam and hot water supply",
      "Collection, purification and distribution of water",
      "Construction",
      "Trade; repair of motor vehicles, household appliances and personal demand items",
      "Activity of hotels and restaurants",
      "Activity of transport",
      "Post and telecommunications",
      "Financial activity",
      "Real estate activities",
      "Renting of machinery and equipment without operator and of personal and",
      "Computer and related activities",
      "Research and development",
      "Other business activities",
      "Public administration",
      "Education",
      "Health care and provision of social aid",
      "Sewage and refuse disposal, sanitation and similar activities",
      "Activities of membership organizations n.e.c.",
      "Recreational, cultural and sporting activities",
      "Other services activities",
  };
  return names;
}

/// Registry matching an industry count, if one is built in.
inline std::optional<std::vector<std::string>> registry_for(std::size_t industries) {
  if (industries == wiod34_registry().size()) return wiod34_registry();
  if (industries == ukraine38_registry().size()) return ukraine38_registry();
  return std::nullopt;
}

}  // namespace eqrec
