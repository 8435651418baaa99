#pragma once
#include <string>

// json
