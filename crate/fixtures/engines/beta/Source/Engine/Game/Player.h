#pragma once
#include <Engine/Scene/Scene.h>

// Player
