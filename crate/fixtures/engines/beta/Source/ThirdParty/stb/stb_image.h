#pragma once
#include <stdlib.h>

// stb_image
